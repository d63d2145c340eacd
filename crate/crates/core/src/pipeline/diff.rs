use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ccs::{CadSequence, Command};

/// One difference between a ground-truth and a regenerated sequence.
/// Positions are 0-based command indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffEntry {
    /// Same command type at aligned positions, different parameters.
    Changed {
        gt: usize,
        generated: usize,
        expected: String,
        found: String,
    },
    Missing {
        gt: usize,
        expected: String,
    },
    Extra {
        generated: usize,
        found: String,
    },
}

/// Aligns the two sequences by a longest common subsequence of whole
/// commands and reports what falls outside it. A missing and an extra
/// command of the same type in one gap are paired as a change.
pub fn sequence_diff(gt: &CadSequence, generated: &CadSequence) -> Vec<DiffEntry> {
    let (a, b) = (gt.commands(), generated.commands());
    let (n, m) = (a.len(), b.len());
    // suffix table: best[i][j] = LCS of a[i..] and b[j..]
    let mut best = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            best[i][j] = if a[i] == b[j] { best[i + 1][j + 1] + 1 } else { best[i + 1][j].max(best[i][j + 1]) };
        }
    }

    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut missing: Vec<usize> = Vec::new();
    let mut extra: Vec<usize> = Vec::new();
    let flush = |missing: &mut Vec<usize>, extra: &mut Vec<usize>, out: &mut Vec<DiffEntry>| {
        let mut extra_left: Vec<Option<usize>> = extra.drain(..).map(Some).collect();
        for gi in missing.drain(..) {
            let paired =
                extra_left.iter_mut().find(|e| e.is_some_and(|e| b[e].kind() == a[gi].kind())).and_then(Option::take);
            out.push(match paired {
                Some(bj) => {
                    DiffEntry::Changed { gt: gi, generated: bj, expected: a[gi].to_string(), found: b[bj].to_string() }
                }
                None => DiffEntry::Missing { gt: gi, expected: a[gi].to_string() },
            });
        }
        for bj in extra_left.into_iter().flatten() {
            out.push(DiffEntry::Extra { generated: bj, found: b[bj].to_string() });
        }
    };
    while i < n || j < m {
        if i < n && j < m && a[i] == b[j] {
            flush(&mut missing, &mut extra, &mut out);
            i += 1;
            j += 1;
        } else if j == m || (i < n && best[i + 1][j] >= best[i][j + 1]) {
            missing.push(i);
            i += 1;
        } else {
            extra.push(j);
            j += 1;
        }
    }
    flush(&mut missing, &mut extra, &mut out);
    out
}

fn param_changes(expected: &Command, found: &Command) -> String {
    expected
        .params()
        .iter()
        .zip(found.params())
        .filter(|(e, f)| e.1 != f.1)
        .map(|(e, f)| format!("{} {} -> {}", e.0, e.1, f.1))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Plain-text issue list handed to a reflection request.
pub fn issues_text(gt: &CadSequence, generated: &CadSequence) -> String {
    let entries = sequence_diff(gt, generated);
    if entries.is_empty() {
        return "The regenerated sequence matches the ground truth.".into();
    }
    let mut out = String::from("Differences between the regenerated and the ground-truth sequence:\n");
    for (k, e) in entries.iter().enumerate() {
        let line = match e {
            DiffEntry::Changed { gt: g, generated: r, .. } => {
                let (exp, got) = (&gt.commands()[*g], &generated.commands()[*r]);
                format!("changed command {}: expected {exp}; got {got} ({})", g + 1, param_changes(exp, got))
            }
            DiffEntry::Missing { gt: g, expected } => format!("missing command {}: {expected}", g + 1),
            DiffEntry::Extra { generated: r, found } => format!("extra command {}: {found}", r + 1),
        };
        writeln!(out, "{}. {line}", k + 1).expect("write to String");
    }
    out.truncate(out.trim_end().len());
    out
}
