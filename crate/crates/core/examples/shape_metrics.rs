//! Chamfer distance, minimum matching distance and Jensen-Shannon
//! divergence between sets of sampled point clouds.
//!
//! ```bash
//! cargo run -p ccskit --example shape_metrics
//! ```

use ccskit::ccs::parse_ccs;
use ccskit::geom::{evaluate_sequence, extract_mesh, sample_point_cloud, Grid, PointCloud};
use ccskit::metrics::{chamfer_distance, jsd, mmd, JSD_GRID};

fn cylinder(radius: u8, seed: u64) -> anyhow::Result<PointCloud> {
    let text = format!(
        "<SOL>\n<Circle>: x=128, y=128, r={radius}\n<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=176, e2=128, b=NewBodyFeatureOperation, u=SymmetricFeatureExtentType\n<EOS>"
    );
    let mesh = extract_mesh(&evaluate_sequence(&parse_ccs(&text)?, Grid::cube(48))?)?;
    Ok(sample_point_cloud(&mesh, 2048, seed)?)
}

fn main() -> anyhow::Result<()> {
    let reference = vec![cylinder(40, 0)?, cylinder(56, 1)?, cylinder(72, 2)?];
    let close = vec![cylinder(42, 3)?, cylinder(54, 4)?, cylinder(74, 5)?];
    let far = vec![cylinder(16, 6)?, cylinder(20, 7)?, cylinder(24, 8)?];

    println!("CD(r=40, r=42) = {:.3}", chamfer_distance(&reference[0], &close[0])?);
    println!("CD(r=40, r=16) = {:.3}", chamfer_distance(&reference[0], &far[0])?);
    for (name, set) in [("close", &close), ("far", &far)] {
        println!("{name}: MMD {:.3}, JSD {:.3}", mmd(&reference, set)?, jsd(&reference, set, JSD_GRID)?);
    }
    Ok(())
}
