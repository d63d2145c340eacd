use nalgebra::Point3;
use rayon::prelude::*;

use super::frame::SketchFrame;
use super::profile::{build_profile, ContainmentIndex, Profile2D};
use super::GeomError;
use crate::ccs::{BooleanOp, ContinuousCommand, ContinuousExtrude, ContinuousSequence, ExtentType};

/// Sampling grid: `resolution` cells per axis over an axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub resolution: usize,
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Default for Grid {
    fn default() -> Self {
        Grid::cube(64)
    }
}

impl Grid {
    /// `resolution³` cells over `[-1, 1]³`.
    pub fn cube(resolution: usize) -> Self {
        Grid { resolution, min: [-1.0; 3], max: [1.0; 3] }
    }

    pub fn pitch(&self) -> [f64; 3] {
        let n = self.resolution as f64;
        [(self.max[0] - self.min[0]) / n, (self.max[1] - self.min[1]) / n, (self.max[2] - self.min[2]) / n]
    }

    pub fn cell_volume(&self) -> f64 {
        let p = self.pitch();
        p[0] * p[1] * p[2]
    }

    /// Center of cell `(i, j, k)`; indices may lie one outside the grid.
    pub fn center(&self, i: isize, j: isize, k: isize) -> Point3<f64> {
        let p = self.pitch();
        Point3::new(
            self.min[0] + (i as f64 + 0.5) * p[0],
            self.min[1] + (j as f64 + 0.5) * p[1],
            self.min[2] + (k as f64 + 0.5) * p[2],
        )
    }

    fn len(&self) -> usize {
        self.resolution.pow(3)
    }
}

/// Dense boolean occupancy on a [`Grid`], x-fastest layout.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelSolid {
    pub grid: Grid,
    occupancy: Vec<bool>,
}

impl VoxelSolid {
    pub fn empty(grid: Grid) -> Self {
        VoxelSolid { grid, occupancy: vec![false; grid.len()] }
    }

    /// Builds a solid from a per-cell-center predicate.
    pub fn from_fn(grid: Grid, inside: impl Fn(&Point3<f64>) -> bool + Sync) -> Self {
        let n = grid.resolution;
        let mut occupancy = vec![false; grid.len()];
        occupancy.par_chunks_mut(n * n).enumerate().for_each(|(k, slab)| {
            for j in 0..n {
                for i in 0..n {
                    slab[j * n + i] = inside(&grid.center(i as isize, j as isize, k as isize));
                }
            }
        });
        VoxelSolid { grid, occupancy }
    }

    pub fn resolution(&self) -> usize {
        self.grid.resolution
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.grid.resolution;
        (k * n + j) * n + i
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.occupancy[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: bool) {
        let idx = self.index(i, j, k);
        self.occupancy[idx] = value;
    }

    /// Occupancy with out-of-grid cells reading as empty.
    pub fn get_padded(&self, i: isize, j: isize, k: isize) -> bool {
        let n = self.grid.resolution as isize;
        if i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n {
            return false;
        }
        self.get(i as usize, j as usize, k as usize)
    }

    pub fn count(&self) -> usize {
        self.occupancy.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.occupancy.iter().any(|&v| v)
    }

    pub fn volume(&self) -> f64 {
        self.count() as f64 * self.grid.cell_volume()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a && !b)
    }

    /// Combines `step` into `self` the way an extrusion's boolean type does.
    /// A new body joins the existing solid.
    pub fn apply(&self, op: BooleanOp, step: &Self) -> Self {
        match op {
            BooleanOp::NewBody | BooleanOp::Join => self.union(step),
            BooleanOp::Cut => self.difference(step),
            BooleanOp::Intersect => self.intersection(step),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.grid, other.grid, "boolean ops need identical grids");
        VoxelSolid {
            grid: self.grid,
            occupancy: self.occupancy.iter().zip(&other.occupancy).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// Axial interval `[lo, hi]` occupied by an extrusion along the local z axis.
pub fn extent_interval(e: &ContinuousExtrude) -> (f64, f64) {
    let (a, b) = match e.extent {
        ExtentType::OneSide => (0.0, e.e1),
        ExtentType::Symmetric => (-0.5 * e.e1.abs(), 0.5 * e.e1.abs()),
        ExtentType::TwoSides => (-e.e2, e.e1),
    };
    (a.min(b), a.max(b))
}

/// One extrusion step: the profile to sweep and how to sweep it.
#[derive(Clone, Debug)]
pub struct Feature {
    pub profile: Profile2D,
    pub extrude: ContinuousExtrude,
}

/// Splits a sequence into extrusion features. Consecutive extrudes reuse
/// the most recent sketch.
pub fn features(seq: &ContinuousSequence) -> Result<Vec<Feature>, GeomError> {
    let mut out = Vec::new();
    let mut loops: Vec<Vec<ContinuousCommand>> = Vec::new();
    let mut current: Option<Profile2D> = None;
    for c in &seq.commands {
        match c {
            ContinuousCommand::Sol => loops.push(Vec::new()),
            ContinuousCommand::Line { .. } | ContinuousCommand::Arc { .. } | ContinuousCommand::Circle { .. } => {
                loops.last_mut().ok_or_else(|| GeomError::InvalidSequence("curve outside a loop".into()))?.push(*c);
            }
            ContinuousCommand::Extrude(e) => {
                if !loops.is_empty() {
                    current = Some(build_profile(&loops)?);
                    loops.clear();
                }
                let profile =
                    current.clone().ok_or_else(|| GeomError::InvalidSequence("extrude without a sketch".into()))?;
                out.push(Feature { profile, extrude: *e });
            }
            ContinuousCommand::Eos => break,
        }
    }
    Ok(out)
}

/// Voxelizes a single extrusion feature.
pub fn feature_solid(feature: &Feature, grid: Grid) -> VoxelSolid {
    let frame = SketchFrame::from_extrude(&feature.extrude);
    let (lo, hi) = extent_interval(&feature.extrude);
    let index = ContainmentIndex::new(&feature.profile);
    let scale = frame.scale;
    VoxelSolid::from_fn(grid, |w| {
        let l = frame.to_local(w);
        l.z >= lo && l.z <= hi && index.contains(l.x / scale, l.y / scale)
    })
}

/// Evaluates every extrusion in order and folds it into the accumulated
/// solid by its boolean type. An all-empty result is returned as-is; check
/// [`VoxelSolid::is_empty`].
pub fn evaluate_solid(seq: &ContinuousSequence, grid: Grid) -> Result<VoxelSolid, GeomError> {
    if grid.resolution < 8 {
        return Err(GeomError::InvalidArgument(format!("resolution {} below the minimum of 8", grid.resolution)));
    }
    let mut acc = VoxelSolid::empty(grid);
    for feature in features(seq)? {
        if feature.extrude.scale <= 0.0 {
            return Err(GeomError::InvalidSequence("extrude scale must be positive".into()));
        }
        let step = feature_solid(&feature, grid);
        acc = acc.apply(feature.extrude.op, &step);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::{dequantize, parse_ccs};

    const SQUARE: &str = "<SOL>
<Line>: x=160, y=96
<Line>: x=160, y=160
<Line>: x=96, y=160
<Line>: x=96, y=96
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=192, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType
<EOS>";

    fn eval(text: &str, res: usize) -> VoxelSolid {
        evaluate_solid(&dequantize(&parse_ccs(text).unwrap()), Grid::cube(res)).unwrap()
    }

    #[test]
    fn square_prism_volume_is_exact_on_aligned_grid() {
        let s = eval(SQUARE, 64);
        assert_eq!(s.count(), 16 * 16 * 16);
        assert!((s.volume() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn extents() {
        let mut e = match dequantize(&parse_ccs(SQUARE).unwrap()).commands[5] {
            ContinuousCommand::Extrude(e) => e,
            _ => unreachable!(),
        };
        assert_eq!(extent_interval(&e), (0.0, 0.5));
        e.e1 = -0.5;
        assert_eq!(extent_interval(&e), (-0.5, 0.0));
        e.extent = ExtentType::Symmetric;
        assert_eq!(extent_interval(&e), (-0.25, 0.25));
        e.extent = ExtentType::TwoSides;
        e.e1 = 0.5;
        e.e2 = 0.25;
        assert_eq!(extent_interval(&e), (-0.25, 0.5));
    }

    #[test]
    fn intersect_with_itself_is_idempotent() {
        let base = eval(SQUARE, 32);
        let twice = SQUARE.replace(
            "<EOS>",
            "<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=192, e2=128, b=10, u=1\n<EOS>",
        );
        assert_eq!(eval(&twice, 32), base);
    }

    #[test]
    fn rejects_tiny_grids() {
        let seq = dequantize(&parse_ccs(SQUARE).unwrap());
        assert!(matches!(evaluate_solid(&seq, Grid::cube(4)), Err(GeomError::InvalidArgument(_))));
    }

    #[test]
    fn leading_cut_leaves_nothing() {
        let cut = SQUARE.replace("NewBodyFeatureOperation", "CutFeatureOperation");
        assert!(eval(&cut, 16).is_empty());
    }
}
