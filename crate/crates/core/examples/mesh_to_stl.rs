//! Evaluate a sequence on a voxel grid and export its surface as binary STL.
//!
//! ```bash
//! cargo run -p ccskit --example mesh_to_stl -- [out.stl] [resolution]
//! ```

use ccskit::ccs::parse_ccs;
use ccskit::geom::{evaluate_sequence, export_stl, extract_mesh, Grid};

/// A square plate with a round hole cut through it.
const PLATE_WITH_HOLE: &str = "<SOL>
<Line>: x=192, y=64
<Line>: x=192, y=192
<Line>: x=64, y=192
<Line>: x=64, y=64
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=160, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType
<SOL>
<Circle>: x=128, y=128, r=32
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=160, e2=128, b=CutFeatureOperation, u=OneSideFeatureExtentType
<EOS>";

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "plate_with_hole.stl".into());
    let resolution: usize = args.next().map(|r| r.parse()).transpose()?.unwrap_or(64);

    let seq = parse_ccs(PLATE_WITH_HOLE)?;
    let solid = evaluate_sequence(&seq, Grid::cube(resolution))?;
    let mesh = extract_mesh(&solid)?;
    println!("voxel volume {:.5}, mesh volume {:.5}", solid.volume(), mesh.volume());
    println!(
        "{} triangles, watertight {}, euler characteristic {}",
        mesh.triangles.len(),
        mesh.is_watertight(),
        mesh.euler_characteristic()
    );

    let file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    let bytes = export_stl(&mesh, file)?;
    println!("wrote {out} ({bytes} bytes)");
    Ok(())
}
