use std::io::{self, BufRead, Read, Write};

use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mesh::TriangleMesh;
use super::GeomError;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3<f64>>,
    /// Seed used to draw the points, when sampled.
    pub seed: Option<u64>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3<f64>>) -> Self {
        PointCloud { points, seed: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One `x y z` line per point, 9 significant digits.
    pub fn write_xyz<W: Write>(&self, mut sink: W) -> io::Result<()> {
        for p in &self.points {
            writeln!(sink, "{:.8e} {:.8e} {:.8e}", p.x, p.y, p.z)?;
        }
        sink.flush()
    }

    pub fn read_xyz<R: BufRead>(source: R) -> io::Result<Self> {
        let mut points = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let coords: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", n + 1)))?;
            let [x, y, z] = coords[..] else {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("line {}: expected 3 coordinates", n + 1),
                ));
            };
            points.push(Point3::new(x, y, z));
        }
        Ok(PointCloud::new(points))
    }

    /// Little-endian `u64` point count followed by `f32` xyz triples.
    pub fn write_binary<W: Write>(&self, mut sink: W) -> io::Result<()> {
        sink.write_all(&(self.points.len() as u64).to_le_bytes())?;
        for p in &self.points {
            for c in [p.x, p.y, p.z] {
                sink.write_all(&(c as f32).to_le_bytes())?;
            }
        }
        sink.flush()
    }

    pub fn read_binary<R: Read>(mut source: R) -> io::Result<Self> {
        let mut word = [0u8; 8];
        source.read_exact(&mut word)?;
        let count = u64::from_le_bytes(word);
        let mut points = Vec::with_capacity(count.min(1 << 24) as usize);
        let mut buf = [0u8; 12];
        for _ in 0..count {
            source.read_exact(&mut buf)?;
            let f = |i: usize| f64::from(f32::from_le_bytes(buf[4 * i..4 * i + 4].try_into().expect("4 bytes")));
            points.push(Point3::new(f(0), f(1), f(2)));
        }
        Ok(PointCloud::new(points))
    }
}

/// Draws `n` points uniformly over the mesh surface: triangles are chosen
/// with probability proportional to area, then a point is placed uniformly
/// inside by folded barycentric coordinates.
pub fn sample_point_cloud(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<PointCloud, GeomError> {
    if n == 0 {
        return Err(GeomError::InvalidArgument("point count must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(mesh.triangles.len());
    let mut total = 0.0;
    for t in &mesh.triangles {
        total += mesh.triangle_area(t);
        cumulative.push(total);
    }
    if total.is_nan() || total <= 0.0 {
        return Err(GeomError::EmptyMesh);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let pick = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= pick).min(cumulative.len() - 1);
            let [a, b, c] = mesh.corners(&mesh.triangles[idx]);
            let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            a + (b - a) * u + (c - a) * v
        })
        .collect();
    Ok(PointCloud { points, seed: Some(seed) })
}
