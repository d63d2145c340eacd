//! Fixed maps between quantized `[0, 255]` integers and real values.
//!
//! | quantity                  | real value          | range        |
//! |---------------------------|---------------------|--------------|
//! | coordinate / translation  | `(v - 128) / 128`   | `[-1, 1)`    |
//! | circle radius             | `v / 128`           | `[0, 2)`     |
//! | sketch scale `s`          | `v / 128`           | `[0, 2)`     |
//! | extrusion distance `e1/e2`| `(v - 128) / 128`   | `[-1, 1)`    |
//! | arc sweep `α`             | `v · 2π / 256`      | `[0, 2π)`    |
//! | Euler `θ`                 | `v · π / 256`       | `[0, π)`     |
//! | Euler `φ`, `γ`            | `(v - 128) · π / 128` | `[-π, π)`  |

use std::f64::consts::PI;

use super::command::{BooleanOp, CadSequence, Command, ExtentType, Extrude};

pub fn coord(v: u8) -> f64 {
    (f64::from(v) - 128.0) / 128.0
}

pub fn length(v: u8) -> f64 {
    f64::from(v) / 128.0
}

pub fn sweep(v: u8) -> f64 {
    f64::from(v) * 2.0 * PI / 256.0
}

pub fn polar(v: u8) -> f64 {
    f64::from(v) * PI / 256.0
}

pub fn signed_angle(v: u8) -> f64 {
    (f64::from(v) - 128.0) * PI / 128.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContinuousCommand {
    Sol,
    Line {
        x: f64,
        y: f64,
    },
    /// `sweep` in radians; `ccw` mirrors the `f` flag.
    Arc {
        x: f64,
        y: f64,
        sweep: f64,
        ccw: bool,
    },
    Circle {
        x: f64,
        y: f64,
        radius: f64,
    },
    Extrude(ContinuousExtrude),
    Eos,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuousExtrude {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub origin: [f64; 3],
    pub scale: f64,
    pub e1: f64,
    pub e2: f64,
    pub op: BooleanOp,
    pub extent: ExtentType,
}

/// A dequantized sequence; same command structure as its source.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContinuousSequence {
    pub commands: Vec<ContinuousCommand>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("command {position}: {param}={value} quantizes outside [0, 255]")]
pub struct RangeError {
    pub position: usize,
    pub param: &'static str,
    pub value: f64,
}

pub fn dequantize(seq: &CadSequence) -> ContinuousSequence {
    let commands = seq
        .iter()
        .map(|c| match *c {
            Command::Sol => ContinuousCommand::Sol,
            Command::Eos => ContinuousCommand::Eos,
            Command::Line { x, y } => ContinuousCommand::Line { x: coord(x), y: coord(y) },
            Command::Arc { x, y, alpha, ccw } => {
                ContinuousCommand::Arc { x: coord(x), y: coord(y), sweep: sweep(alpha), ccw }
            }
            Command::Circle { x, y, r } => ContinuousCommand::Circle { x: coord(x), y: coord(y), radius: length(r) },
            Command::Extrude(e) => ContinuousCommand::Extrude(ContinuousExtrude {
                theta: polar(e.theta),
                phi: signed_angle(e.phi),
                gamma: signed_angle(e.gamma),
                origin: [coord(e.px), coord(e.py), coord(e.pz)],
                scale: length(e.s),
                e1: coord(e.e1),
                e2: coord(e.e2),
                op: e.op,
                extent: e.extent,
            }),
        })
        .collect();
    ContinuousSequence { commands }
}

/// Inverse of [`dequantize`] with round-half-up.
pub fn quantize(cont: &ContinuousSequence) -> Result<CadSequence, RangeError> {
    cont.commands
        .iter()
        .enumerate()
        .map(|(position, c)| {
            let q = |param: &'static str, value: f64, quantized: f64| {
                let rounded = (quantized + 0.5).floor();
                if rounded.is_finite() && (0.0..=255.0).contains(&rounded) {
                    Ok(rounded as u8)
                } else {
                    Err(RangeError { position, param, value })
                }
            };
            let coord = |param, v: f64| q(param, v, v * 128.0 + 128.0);
            let length = |param, v: f64| q(param, v, v * 128.0);
            Ok(match *c {
                ContinuousCommand::Sol => Command::Sol,
                ContinuousCommand::Eos => Command::Eos,
                ContinuousCommand::Line { x, y } => Command::Line { x: coord("x", x)?, y: coord("y", y)? },
                ContinuousCommand::Arc { x, y, sweep, ccw } => Command::Arc {
                    x: coord("x", x)?,
                    y: coord("y", y)?,
                    alpha: q("alpha", sweep, sweep * 256.0 / (2.0 * PI))?,
                    ccw,
                },
                ContinuousCommand::Circle { x, y, radius } => {
                    Command::Circle { x: coord("x", x)?, y: coord("y", y)?, r: length("r", radius)? }
                }
                ContinuousCommand::Extrude(e) => Command::Extrude(Extrude {
                    theta: q("theta", e.theta, e.theta * 256.0 / PI)?,
                    phi: q("phi", e.phi, e.phi * 128.0 / PI + 128.0)?,
                    gamma: q("gamma", e.gamma, e.gamma * 128.0 / PI + 128.0)?,
                    px: coord("px", e.origin[0])?,
                    py: coord("py", e.origin[1])?,
                    pz: coord("pz", e.origin[2])?,
                    s: length("s", e.scale)?,
                    e1: coord("e1", e.e1)?,
                    e2: coord("e2", e.e2)?,
                    op: e.op,
                    extent: e.extent,
                }),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points_of_the_maps() {
        assert_eq!(coord(128), 0.0);
        assert_eq!(coord(192), 0.5);
        assert_eq!(coord(0), -1.0);
        assert!((sweep(64) - PI / 2.0).abs() < 1e-15);
        assert_eq!(length(128), 1.0);
        assert_eq!(signed_angle(128), 0.0);
        assert_eq!(polar(0), 0.0);
    }

    #[test]
    fn every_value_round_trips() {
        for v in 0..=255u8 {
            let seq = CadSequence::new(vec![
                Command::Arc { x: v, y: 255 - v, alpha: v, ccw: v % 2 == 0 },
                Command::Circle { x: v, y: v, r: v },
                Command::Extrude(Extrude {
                    theta: v,
                    phi: v,
                    gamma: 255 - v,
                    px: v,
                    py: v,
                    pz: v,
                    s: v,
                    e1: v,
                    e2: 255 - v,
                    ..Extrude::default()
                }),
            ]);
            assert_eq!(quantize(&dequantize(&seq)).unwrap(), seq, "value {v}");
        }
    }

    #[test]
    fn rounding_and_range() {
        let one = |x: f64| ContinuousSequence { commands: vec![ContinuousCommand::Line { x, y: 0.0 }] };
        assert_eq!(quantize(&one(0.0)).unwrap().commands()[0], Command::Line { x: 128, y: 128 });
        // 0.5/128 above zero sits exactly on a tie and rounds up
        assert_eq!(quantize(&one(0.5 / 128.0)).unwrap().commands()[0], Command::Line { x: 129, y: 128 });
        let err = quantize(&one(1.01)).unwrap_err();
        assert_eq!(err.param, "x");
        assert!(quantize(&one(1.0)).is_err());
        assert!(quantize(&one(f64::NAN)).is_err());
    }
}
