#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use ccskit::ccs::{parse_ccs, BooleanOp, CadSequence, Command, ExtentType, Extrude};
use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixture path; also resolves from sibling crates that share this module.
pub fn fixture(rel: &str) -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = here.join("tests/fixtures");
    let root = if local.is_dir() { local } else { here.join("../core/tests/fixtures") };
    root.join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn seq_fixture(rel: &str) -> CadSequence {
    parse_ccs(&read_fixture(rel)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random command with every parameter drawn from its full range.
pub fn random_command(rng: &mut ChaCha8Rng) -> Command {
    let mut v = || rng.random::<u8>();
    match v() % 6 {
        0 => Command::Sol,
        1 => Command::Line { x: v(), y: v() },
        2 => {
            let (x, y, alpha, f) = (v(), v(), v(), v());
            Command::Arc { x, y, alpha, ccw: f % 2 == 1 }
        }
        3 => Command::Circle { x: v(), y: v(), r: v() },
        4 => {
            let ops = [BooleanOp::NewBody, BooleanOp::Join, BooleanOp::Cut, BooleanOp::Intersect];
            let extents = [ExtentType::OneSide, ExtentType::Symmetric, ExtentType::TwoSides];
            Command::Extrude(Extrude {
                theta: v(),
                phi: v(),
                gamma: v(),
                px: v(),
                py: v(),
                pz: v(),
                s: v(),
                e1: v(),
                e2: v(),
                op: ops[usize::from(v()) % 4],
                extent: extents[usize::from(v()) % 3],
            })
        }
        _ => Command::Eos,
    }
}

/// Random grammar-level sequence; structural validity is not enforced.
pub fn random_sequence(rng: &mut ChaCha8Rng, max_len: usize) -> CadSequence {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| random_command(rng)).collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point3<f64>> {
    (0..n)
        .map(|_| Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Squared distance written out term by term.
pub fn sq(a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

/// O(n·m) chamfer distance with the library's scale.
pub fn brute_chamfer(a: &[Point3<f64>], b: &[Point3<f64>]) -> f64 {
    let one_way = |from: &[Point3<f64>], to: &[Point3<f64>]| {
        let mut total = 0.0;
        for p in from {
            let mut best = f64::INFINITY;
            for q in to {
                let d = sq(p, q);
                if d < best {
                    best = d;
                }
            }
            total += best;
        }
        total / from.len() as f64
    };
    (one_way(a, b) + one_way(b, a)) * 1000.0
}

/// Top-down memoized LCS, independent of the library's bottom-up table.
pub fn memo_lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    fn go<T: PartialEq>(a: &[T], b: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() || j == b.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            1 + go(a, b, i + 1, j + 1, memo)
        } else {
            go(a, b, i + 1, j, memo).max(go(a, b, i, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

/// Longest subsequence of `a` (by exhaustive enumeration) that is also a
/// subsequence of `b`. Only for `a.len() <= 16`.
pub fn exhaustive_lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    assert!(a.len() <= 16);
    let is_subsequence = |mask: u32| {
        let mut j = 0;
        for (i, x) in a.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            while j < b.len() && b[j] != *x {
                j += 1;
            }
            if j == b.len() {
                return false;
            }
            j += 1;
        }
        true
    };
    (0u32..1 << a.len()).filter(|&m| is_subsequence(m)).map(|m| m.count_ones() as usize).max().unwrap_or(0)
}
