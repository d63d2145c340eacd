//! Geometric evaluation: sketch profiles, voxel CSG, surface extraction,
//! STL export and surface point sampling.

mod arc;
mod frame;
mod mesh;
mod profile;
mod sampling;
mod stl;
mod voxel;

pub use arc::{solve_arc, ArcGeometry};
pub use frame::SketchFrame;
pub use mesh::{extract_mesh, TriangleMesh};
pub use profile::{
    build_profile, point_in_profile, ContainmentIndex, LoopShape, Profile2D, ProfileLoop, Segment, Winding,
};
pub use sampling::{sample_point_cloud, PointCloud};
pub use stl::{export_stl, read_stl};
pub use voxel::{evaluate_solid, extent_interval, feature_solid, features, Feature, Grid, VoxelSolid};

use crate::ccs::{dequantize, validate, CadSequence};

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("degenerate arc: {0}")]
    DegenerateArc(String),
    #[error("loop does not close (gap {gap:.3e})")]
    OpenLoop { gap: f64 },
    #[error("solid is empty")]
    EmptySolid,
    #[error("mesh has no area to sample")]
    EmptyMesh,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Validates, dequantizes and voxelizes a quantized sequence.
pub fn evaluate_sequence(seq: &CadSequence, grid: Grid) -> Result<VoxelSolid, GeomError> {
    let report = validate(seq);
    if !report.ok {
        let first = &report.issues[0];
        return Err(GeomError::InvalidSequence(format!(
            "{} at command {}: {}",
            first.code, first.position, first.message
        )));
    }
    evaluate_solid(&dequantize(seq), grid)
}
