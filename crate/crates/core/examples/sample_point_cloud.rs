//! Sample a fixed-size, seeded point cloud from a mesh surface.
//!
//! ```bash
//! cargo run -p ccskit --example sample_point_cloud -- [out.xyz]
//! ```

use ccskit::ccs::parse_ccs;
use ccskit::geom::{evaluate_sequence, extract_mesh, sample_point_cloud, Grid};

const DISC: &str = "<SOL>
<Circle>: x=128, y=128, r=64
<Extrude>: θ=0, φ=128, γ=128, px=128, py=128, pz=128, s=128, e1=160, e2=128, b=NewBodyFeatureOperation, u=SymmetricFeatureExtentType
<EOS>";

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "disc.xyz".into());
    let mesh = extract_mesh(&evaluate_sequence(&parse_ccs(DISC)?, Grid::cube(64))?)?;

    let cloud = sample_point_cloud(&mesh, 8000, 7)?;
    assert_eq!(cloud, sample_point_cloud(&mesh, 8000, 7)?);
    let (lo, hi) = cloud.points.iter().fold(([f64::MAX; 3], [f64::MIN; 3]), |(mut lo, mut hi), p| {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
        (lo, hi)
    });
    println!("{} points, bounds {lo:.3?} .. {hi:.3?}", cloud.len());

    cloud.write_xyz(std::io::BufWriter::new(std::fs::File::create(&out)?))?;
    println!("wrote {out}");
    Ok(())
}
