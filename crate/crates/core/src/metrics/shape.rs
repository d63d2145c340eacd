use nalgebra::Point3;
use rayon::prelude::*;

use super::MetricsError;
use crate::geom::PointCloud;

/// Scale applied to raw chamfer distances in reports.
pub const CD_SCALE: f64 = 1000.0;
/// Scale applied to raw Jensen-Shannon divergences in reports.
pub const JSD_SCALE: f64 = 100.0;
/// Default histogram lattice resolution for [`jsd`].
pub const JSD_GRID: usize = 28;

#[inline]
fn sq_dist(a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

/// Static kd-tree over a point set for exact nearest-neighbor queries.
pub struct KdTree<'a> {
    points: &'a [Point3<f64>],
    /// Point indices in tree order; node `[lo, hi)` splits at `(lo + hi) / 2`.
    order: Vec<usize>,
}

impl<'a> KdTree<'a> {
    pub fn new(points: &'a [Point3<f64>]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build(points, &mut order, 0);
        KdTree { points, order }
    }

    /// Smallest squared distance from `q` to any point in the set.
    pub fn nearest_sq(&self, q: &Point3<f64>) -> f64 {
        let mut best = f64::INFINITY;
        self.search(q, 0, self.order.len(), 0, &mut best);
        best
    }

    fn search(&self, q: &Point3<f64>, lo: usize, hi: usize, axis: usize, best: &mut f64) {
        if hi - lo <= 8 {
            for &i in &self.order[lo..hi] {
                *best = best.min(sq_dist(q, &self.points[i]));
            }
            return;
        }
        let mid = (lo + hi) / 2;
        let split = &self.points[self.order[mid]];
        *best = best.min(sq_dist(q, split));
        let diff = q[axis] - split[axis];
        let next = (axis + 1) % 3;
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(q, near.0, near.1, next, best);
        // Every point on the far side is at least |diff| away along `axis`.
        if diff * diff <= *best {
            self.search(q, far.0, far.1, next, best);
        }
    }
}

fn build(points: &[Point3<f64>], order: &mut [usize], axis: usize) {
    if order.len() <= 8 {
        return;
    }
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| points[a][axis].total_cmp(&points[b][axis]));
    let (left, rest) = order.split_at_mut(mid);
    build(points, left, (axis + 1) % 3);
    build(points, &mut rest[1..], (axis + 1) % 3);
}

/// Mean over `from` of the squared distance to the nearest point of `to`.
/// Terms are summed in `from` order.
fn mean_nearest(from: &[Point3<f64>], to: &KdTree) -> f64 {
    let nearest: Vec<f64> = from.par_iter().map(|p| to.nearest_sq(p)).collect();
    nearest.iter().sum::<f64>() / from.len() as f64
}

/// Symmetric chamfer distance, scaled by [`CD_SCALE`].
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptyCloud);
    }
    let (ta, tb) = (KdTree::new(&a.points), KdTree::new(&b.points));
    let ab = mean_nearest(&a.points, &tb);
    let ba = mean_nearest(&b.points, &ta);
    Ok((ab + ba) * CD_SCALE)
}

/// Minimum matching distance: for each reference cloud, the smallest
/// chamfer distance to any generated cloud, averaged over references.
pub fn mmd(reference: &[PointCloud], generated: &[PointCloud]) -> Result<f64, MetricsError> {
    if reference.is_empty() || generated.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let best: Vec<f64> = reference
        .par_iter()
        .map(|r| {
            generated.iter().map(|g| chamfer_distance(r, g)).try_fold(f64::INFINITY, |m, cd| cd.map(|cd| m.min(cd)))
        })
        .collect::<Result<_, _>>()?;
    Ok(best.iter().sum::<f64>() / reference.len() as f64)
}

/// Normalized occupancy histogram of pooled points on a `res³` lattice over
/// `[-1, 1]³`; points outside are clamped to the boundary cells.
pub fn occupancy_histogram(set: &[PointCloud], res: usize) -> Vec<f64> {
    let mut counts = vec![0u64; res * res * res];
    let bin = |c: f64| (((c + 1.0) * 0.5 * res as f64).floor().max(0.0) as usize).min(res - 1);
    let mut total = 0u64;
    for p in set.iter().flat_map(|c| &c.points) {
        counts[(bin(p.z) * res + bin(p.y)) * res + bin(p.x)] += 1;
        total += 1;
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Jensen-Shannon divergence (natural log) between the pooled occupancy
/// distributions of two sets, scaled by [`JSD_SCALE`].
pub fn jsd(set_a: &[PointCloud], set_b: &[PointCloud], grid_res: usize) -> Result<f64, MetricsError> {
    if grid_res < 2 {
        return Err(MetricsError::InvalidArgument(format!("grid_res {grid_res} below 2")));
    }
    let points = |s: &[PointCloud]| s.iter().map(PointCloud::len).sum::<usize>();
    if set_a.is_empty() || set_b.is_empty() || points(set_a) == 0 || points(set_b) == 0 {
        return Err(MetricsError::EmptySet);
    }
    let p = occupancy_histogram(set_a, grid_res);
    let q = occupancy_histogram(set_b, grid_res);
    let term = |x: f64, m: f64| if x > 0.0 { x * (x / m).ln() } else { 0.0 };
    let divergence: f64 = p
        .iter()
        .zip(&q)
        .map(|(&x, &y)| {
            let m = 0.5 * (x + y);
            0.5 * (term(x, m) + term(y, m))
        })
        .sum();
    Ok(divergence.clamp(0.0, std::f64::consts::LN_2) * JSD_SCALE)
}
