//! JSON mirror of the text grammar:
//! `{"commands":[{"type":"Line","x":207,"y":112}, ...]}`.
//!
//! Field names follow the ASCII parameter spellings; Greek spellings are
//! accepted as aliases on input. `b`/`u` serialize symbolically and accept
//! either names or integer codes.

use serde::{Deserialize, Serialize};

use super::command::{BooleanOp, CadSequence, Command, ExtentType, Extrude};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("command {index}: {param}={value} is out of range")]
    Range { index: usize, param: &'static str, value: String },
}

#[derive(Serialize, Deserialize)]
struct JsonSequence {
    commands: Vec<JsonCommand>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum Code {
    Int(i64),
    Name(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum JsonCommand {
    #[serde(rename = "SOL")]
    Sol,
    Line {
        x: i64,
        y: i64,
    },
    Arc {
        x: i64,
        y: i64,
        #[serde(alias = "α")]
        alpha: i64,
        f: i64,
    },
    Circle {
        x: i64,
        y: i64,
        r: i64,
    },
    Extrude {
        #[serde(alias = "θ")]
        theta: i64,
        #[serde(alias = "φ")]
        phi: i64,
        #[serde(alias = "γ")]
        gamma: i64,
        px: i64,
        py: i64,
        pz: i64,
        s: i64,
        e1: i64,
        e2: i64,
        b: Code,
        u: Code,
    },
    #[serde(rename = "EOS")]
    Eos,
}

pub fn to_json(seq: &CadSequence) -> String {
    let commands = seq
        .iter()
        .map(|c| match *c {
            Command::Sol => JsonCommand::Sol,
            Command::Eos => JsonCommand::Eos,
            Command::Line { x, y } => JsonCommand::Line { x: x.into(), y: y.into() },
            Command::Arc { x, y, alpha, ccw } => {
                JsonCommand::Arc { x: x.into(), y: y.into(), alpha: alpha.into(), f: ccw as i64 }
            }
            Command::Circle { x, y, r } => JsonCommand::Circle { x: x.into(), y: y.into(), r: r.into() },
            Command::Extrude(e) => JsonCommand::Extrude {
                theta: e.theta.into(),
                phi: e.phi.into(),
                gamma: e.gamma.into(),
                px: e.px.into(),
                py: e.py.into(),
                pz: e.pz.into(),
                s: e.s.into(),
                e1: e.e1.into(),
                e2: e.e2.into(),
                b: Code::Name(e.op.name().into()),
                u: Code::Name(e.extent.name().into()),
            },
        })
        .collect();
    serde_json::to_string(&JsonSequence { commands }).expect("plain data serializes")
}

pub fn from_json(text: &str) -> Result<CadSequence, JsonError> {
    let doc: JsonSequence = serde_json::from_str(text)?;
    doc.commands.into_iter().enumerate().map(|(index, c)| convert(index, c)).collect()
}

fn convert(index: usize, c: JsonCommand) -> Result<Command, JsonError> {
    let q = |param: &'static str, v: i64| {
        u8::try_from(v).map_err(|_| JsonError::Range { index, param, value: v.to_string() })
    };
    Ok(match c {
        JsonCommand::Sol => Command::Sol,
        JsonCommand::Eos => Command::Eos,
        JsonCommand::Line { x, y } => Command::Line { x: q("x", x)?, y: q("y", y)? },
        JsonCommand::Arc { x, y, alpha, f } => Command::Arc {
            x: q("x", x)?,
            y: q("y", y)?,
            alpha: q("alpha", alpha)?,
            ccw: match f {
                0 => false,
                1 => true,
                other => return Err(JsonError::Range { index, param: "f", value: other.to_string() }),
            },
        },
        JsonCommand::Circle { x, y, r } => Command::Circle { x: q("x", x)?, y: q("y", y)?, r: q("r", r)? },
        JsonCommand::Extrude { theta, phi, gamma, px, py, pz, s, e1, e2, b, u } => {
            let op = match &b {
                Code::Int(v) => BooleanOp::from_code(*v),
                Code::Name(n) => BooleanOp::from_name(n),
            };
            let extent = match &u {
                Code::Int(v) => ExtentType::from_code(*v),
                Code::Name(n) => ExtentType::from_name(n),
            };
            let describe = |c: &Code| match c {
                Code::Int(v) => v.to_string(),
                Code::Name(n) => n.clone(),
            };
            Command::Extrude(Extrude {
                theta: q("theta", theta)?,
                phi: q("phi", phi)?,
                gamma: q("gamma", gamma)?,
                px: q("px", px)?,
                py: q("py", py)?,
                pz: q("pz", pz)?,
                s: q("s", s)?,
                e1: q("e1", e1)?,
                e2: q("e2", e2)?,
                op: op.ok_or_else(|| JsonError::Range { index, param: "b", value: describe(&b) })?,
                extent: extent.ok_or_else(|| JsonError::Range { index, param: "u", value: describe(&u) })?,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::parse_ccs;

    #[test]
    fn mirrors_the_text_form() {
        let seq = parse_ccs(
            "<SOL>\n<Circle>: x=176, y=128, r=47\n<Extrude>: theta=128, phi=128, gamma=128, px=70, py=128, pz=128, s=115, e1=142, e2=128, b=7, u=1\n<EOS>",
        )
        .unwrap();
        let json = to_json(&seq);
        assert!(json.starts_with(r#"{"commands":[{"type":"SOL"},{"type":"Circle","x":176,"y":128,"r":47}"#));
        assert!(json.contains(r#""b":"NewBodyFeatureOperation""#));
        assert_eq!(from_json(&json).unwrap(), seq);
    }

    #[test]
    fn accepts_greek_aliases_and_integer_codes() {
        let seq = from_json(
            r#"{"commands":[{"type":"Arc","x":1,"y":2,"α":64,"f":1},{"type":"Extrude","θ":1,"φ":2,"γ":3,"px":4,"py":5,"pz":6,"s":7,"e1":8,"e2":9,"b":9,"u":"TwoSidesFeatureExtentType"}]}"#,
        )
        .unwrap();
        match seq.commands()[1] {
            Command::Extrude(e) => {
                assert_eq!(e.op, BooleanOp::Cut);
                assert_eq!(e.extent, ExtentType::TwoSides);
            }
            _ => panic!("expected extrude"),
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let err = from_json(r#"{"commands":[{"type":"Line","x":256,"y":0}]}"#).unwrap_err();
        assert!(matches!(err, JsonError::Range { param: "x", .. }));
        let err = from_json(r#"{"commands":[{"type":"Arc","x":1,"y":1,"alpha":3,"f":2}]}"#).unwrap_err();
        assert!(matches!(err, JsonError::Range { param: "f", .. }));
    }
}
