//! Toolkit for sketch-and-extrude CAD command sequences.
//!
//! - [`ccs`]: the command grammar, validation and quantization
//! - [`geom`]: voxel evaluation, meshing, STL export and point sampling
//! - [`metrics`]: LCS ratio, per-command classification scores, CD/MMD/JSD
//! - [`pipeline`]: reverse validation, reflection retries, confidence
//!   flagging and batch runs over pluggable generator clients

pub mod ccs;
pub mod geom;
pub mod metrics;
pub mod pipeline;
