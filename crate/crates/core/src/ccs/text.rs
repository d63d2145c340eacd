//! The line-oriented text grammar.
//!
//! ```text
//! <SOL>
//! <Arc>: x=144, y=112, α=64, f=1
//! <Line>: x=207, y=112
//! <Circle>: x=176, y=128, r=47
//! <Extrude>: θ=192, φ=64, γ=192, px=105, py=121, pz=40, s=46, e1=148, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType
//! <EOS>
//! ```
//!
//! Input is whitespace tolerant and accepts ASCII/Greek/LaTeX parameter
//! names plus integer or symbolic boolean and extent types. Output is always
//! the canonical form produced by [`serialize_ccs`].

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::command::{BooleanOp, CadSequence, Command, CommandType, ExtentType, Extrude, ParamName};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: expected {expected}")]
    Syntax { line: usize, column: usize, expected: String },
    #[error("value out of range at {line}:{column}: {param}={value}")]
    Range { line: usize, column: usize, param: &'static str, value: i64 },
}

impl ParseError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::Range { .. } => "RangeError",
        }
    }
}

pub fn parse_ccs(text: &str) -> Result<CadSequence, ParseError> {
    let mut commands = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        commands.push(LineParser::new(line, i + 1).command()?);
    }
    Ok(CadSequence::new(commands))
}

/// Canonical text: one command per line, Greek angle names, symbolic
/// boolean/extent names, `", "` separators, no trailing newline.
pub fn serialize_ccs(seq: &CadSequence) -> String {
    let mut out = String::new();
    for (i, command) in seq.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_command(&mut out, command);
    }
    out
}

pub(crate) fn write_command(out: &mut String, command: &Command) {
    let kind = command.kind();
    let _ = write!(out, "<{}>", kind.tag());
    let params = command.params();
    if params.is_empty() {
        return;
    }
    out.push(':');
    for (i, (name, value)) in params.into_iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        out.push_str(name.canonical());
        out.push('=');
        match (name, command) {
            (ParamName::B, Command::Extrude(e)) => out.push_str(e.op.name()),
            (ParamName::U, Command::Extrude(e)) => out.push_str(e.extent.name()),
            _ => {
                let _ = write!(out, "{value}");
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_command(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for CadSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_ccs(self))
    }
}

impl FromStr for CadSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ccs(s)
    }
}

/// Sequences embedded in other serde documents travel as canonical text.
impl serde::Serialize for CadSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&serialize_ccs(self))
    }
}

impl<'de> serde::Deserialize<'de> for CadSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ccs(&text).map_err(serde::de::Error::custom)
    }
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn new(raw: &str, line: usize) -> Self {
        LineParser { chars: raw.chars().collect(), pos: 0, line }
    }

    fn syntax_at(&self, column: usize, expected: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column, expected: expected.into() }
    }

    fn syntax(&self, expected: impl Into<String>) -> ParseError {
        self.syntax_at(self.pos + 1, expected)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn command(mut self) -> Result<Command, ParseError> {
        if !self.eat('<') {
            return Err(self.syntax("`<` opening a command tag"));
        }
        let tag_col = self.pos + 1;
        let tag = self.take_while(|c| c != '>');
        let kind = CommandType::from_tag(tag.trim())
            .ok_or_else(|| self.syntax_at(tag_col, "one of SOL, Line, Arc, Circle, Extrude, EOS"))?;
        if !self.eat('>') {
            return Err(self.syntax("`>` closing the command tag"));
        }

        let expected = expected_params(kind);
        if expected.is_empty() {
            self.skip_ws();
            if self.peek().is_some() {
                return Err(self.syntax(format!("end of line after <{}>", kind.tag())));
            }
            return Ok(if kind == CommandType::Sol { Command::Sol } else { Command::Eos });
        }

        if !self.eat(':') {
            return Err(self.syntax("`:` before the parameter list"));
        }
        let mut values: Vec<Option<(i64, usize)>> = vec![None; expected.len()];
        loop {
            self.skip_ws();
            let name_col = self.pos + 1;
            let raw_name = self.take_while(|c| c != '=' && c != ',');
            let slot = ParamName::lookup(&raw_name)
                .and_then(|name| expected.iter().position(|p| *p == name))
                .ok_or_else(|| self.syntax_at(name_col, format!("a parameter name of <{}>", kind.tag())))?;
            if values[slot].is_some() {
                return Err(self.syntax_at(name_col, format!("a single `{}`", expected[slot].ascii())));
            }
            if !self.eat('=') {
                return Err(self.syntax("`=`"));
            }
            self.skip_ws();
            let value_col = self.pos + 1;
            let value = self.value(expected[slot])?;
            values[slot] = Some((value, value_col));

            self.skip_ws();
            match self.peek() {
                None => break,
                Some(',') => self.pos += 1,
                Some(_) => return Err(self.syntax("`,` or end of line")),
            }
        }

        let mut out = [0i64; 11];
        for (i, name) in expected.iter().enumerate() {
            let (v, col) = values[i]
                .ok_or_else(|| self.syntax_at(self.chars.len() + 1, format!("parameter `{}`", name.ascii())))?;
            let ok = match name {
                ParamName::F => (0..=1).contains(&v),
                ParamName::B => BooleanOp::from_code(v).is_some(),
                ParamName::U => ExtentType::from_code(v).is_some(),
                _ => (0..=255).contains(&v),
            };
            if !ok {
                return Err(ParseError::Range { line: self.line, column: col, param: name.ascii(), value: v });
            }
            out[i] = v;
        }
        let q = |i: usize| out[i] as u8;
        Ok(match kind {
            CommandType::Line => Command::Line { x: q(0), y: q(1) },
            CommandType::Arc => Command::Arc { x: q(0), y: q(1), alpha: q(2), ccw: out[3] == 1 },
            CommandType::Circle => Command::Circle { x: q(0), y: q(1), r: q(2) },
            CommandType::Extrude => Command::Extrude(Extrude {
                theta: q(0),
                phi: q(1),
                gamma: q(2),
                px: q(3),
                py: q(4),
                pz: q(5),
                s: q(6),
                e1: q(7),
                e2: q(8),
                op: BooleanOp::from_code(out[9]).expect("range-checked"),
                extent: ExtentType::from_code(out[10]).expect("range-checked"),
            }),
            CommandType::Sol | CommandType::Eos => unreachable!("parameterless tags return early"),
        })
    }

    /// Integer literal, or a symbolic name for `b` / `u`.
    fn value(&mut self, name: ParamName) -> Result<i64, ParseError> {
        let col = self.pos + 1;
        let word = self.take_while(|c| c != ',' && !c.is_whitespace());
        if let Ok(v) = word.parse::<i64>() {
            return Ok(v);
        }
        let symbolic = match name {
            ParamName::B => BooleanOp::from_name(&word).map(|op| i64::from(op.code())),
            ParamName::U => ExtentType::from_name(&word).map(|e| i64::from(e.code())),
            _ => None,
        };
        symbolic.ok_or_else(|| {
            let what = match name {
                ParamName::B => "an integer 7-10 or a boolean operation name",
                ParamName::U => "an integer 1-3 or an extent type name",
                _ => "an integer",
            };
            self.syntax_at(col, what)
        })
    }
}

fn expected_params(kind: CommandType) -> &'static [ParamName] {
    use ParamName::*;
    match kind {
        CommandType::Sol | CommandType::Eos => &[],
        CommandType::Line => &[X, Y],
        CommandType::Arc => &[X, Y, Alpha, F],
        CommandType::Circle => &[X, Y, R],
        CommandType::Extrude => &[Theta, Phi, Gamma, Px, Py, Pz, S, E1, E2, B, U],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_line_listing() {
        let seq = parse_ccs("<SOL>\n<Line>: x=207, y=112\n<EOS>").unwrap();
        assert_eq!(seq.commands(), [Command::Sol, Command::Line { x: 207, y: 112 }, Command::Eos]);
    }

    #[test]
    fn parses_symbolic_extrude_with_latex_names() {
        let seq = parse_ccs(
            r"<Extrude>: $\theta$=192, $\varphi$=64, $\gamma$=192, px=105, py=121, pz=40, s=46, e1=148, e2=128, b=NewBodyFeatureOperation, u=OneSideFeatureExtentType",
        )
        .unwrap();
        let expected = Extrude {
            theta: 192,
            phi: 64,
            gamma: 192,
            px: 105,
            py: 121,
            pz: 40,
            s: 46,
            e1: 148,
            e2: 128,
            op: BooleanOp::NewBody,
            extent: ExtentType::OneSide,
        };
        assert_eq!(seq.commands(), [Command::Extrude(expected)]);
        let ascii = parse_ccs(
            "<Extrude>:theta = 192,phi=64 , gamma=192, px=105, py=121, pz=40, s=46, e1=148, e2=128, b=7, u=1",
        )
        .unwrap();
        assert_eq!(ascii, seq);
    }

    #[test]
    fn serializes_canonically() {
        let seq = CadSequence::new(vec![Command::Sol, Command::Circle { x: 176, y: 128, r: 47 }, Command::Eos]);
        assert_eq!(serialize_ccs(&seq), "<SOL>\n<Circle>: x=176, y=128, r=47\n<EOS>");
        assert_eq!(serialize_ccs(&parse_ccs("<SOL>\n<EOS>").unwrap()), "<SOL>\n<EOS>");
        let arc = parse_ccs("<Arc>: alpha=64, f=1, y=112, x=144").unwrap();
        assert_eq!(arc.to_string(), "<Arc>: x=144, y=112, α=64, f=1");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_ccs("<SOL>\n<Lin>: x=1, y=2").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax { line: 2, column: 2, expected: "one of SOL, Line, Arc, Circle, Extrude, EOS".into() }
        );
        assert_eq!(err.code(), "SyntaxError");

        assert!(matches!(parse_ccs("<Line>: x=1").unwrap_err(), ParseError::Syntax { line: 1, column: 12, .. }));
        assert!(matches!(parse_ccs("<Line>: x=1, x=2, y=3").unwrap_err(), ParseError::Syntax { column: 14, .. }));
        assert!(matches!(parse_ccs("<Line>: x=one, y=3").unwrap_err(), ParseError::Syntax { column: 11, .. }));
        assert!(matches!(parse_ccs("<Line>: x=1 y=3").unwrap_err(), ParseError::Syntax { .. }));
        assert!(matches!(parse_ccs("<SOL> extra").unwrap_err(), ParseError::Syntax { .. }));
        assert!(matches!(parse_ccs("Line: x=1, y=1").unwrap_err(), ParseError::Syntax { column: 1, .. }));
    }

    #[test]
    fn range_errors() {
        let err = parse_ccs("<Line>: x=256, y=0").unwrap_err();
        assert_eq!(err, ParseError::Range { line: 1, column: 11, param: "x", value: 256 });
        assert!(matches!(
            parse_ccs("<Arc>: x=1, y=1, α=3, f=-1").unwrap_err(),
            ParseError::Range { param: "f", value: -1, .. }
        ));
        let bad_b = "<Extrude>: θ=0, φ=0, γ=0, px=0, py=0, pz=0, s=0, e1=0, e2=0, b=11, u=1";
        assert!(matches!(parse_ccs(bad_b).unwrap_err(), ParseError::Range { param: "b", .. }));
    }

    #[test]
    fn structural_violations_still_parse() {
        let seq = parse_ccs("<EOS>\n\n  <Line>: x=1, y=1  \n<SOL>").unwrap();
        assert_eq!(seq.len(), 3);
    }
}
