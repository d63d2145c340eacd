use std::fmt;

use super::command::{CadSequence, CommandType, ParamName};

/// A comparable atom of a flattened sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Command(CommandType),
    Param(ParamName, u8),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Command(t) => f.write_str(&t.tag().to_ascii_uppercase()),
            Token::Param(name, v) => write!(f, "{}:{v}", name.ascii()),
        }
    }
}

/// How finely [`token_stream`] splits a sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    /// One atom per command marker plus one per parameter.
    #[default]
    Parameter,
    /// One atom per command marker only.
    Command,
}

/// Flattens `seq` into parameter-level atoms in command order.
pub fn token_stream(seq: &CadSequence) -> Vec<Token> {
    token_stream_with(seq, Granularity::Parameter)
}

pub fn token_stream_with(seq: &CadSequence, granularity: Granularity) -> Vec<Token> {
    let mut out = Vec::with_capacity(seq.len() * 4);
    for command in seq {
        out.push(Token::Command(command.kind()));
        if granularity == Granularity::Parameter {
            out.extend(command.params().into_iter().map(|(n, v)| Token::Param(n, v)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::{parse_ccs, Command, Extrude};

    #[test]
    fn flattens_in_command_order() {
        let seq = parse_ccs("<SOL>\n<Line>: x=207, y=112\n<EOS>").unwrap();
        let rendered: Vec<String> = token_stream(&seq).iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["SOL", "LINE", "x:207", "y:112", "EOS"]);
    }

    #[test]
    fn extrude_is_twelve_atoms() {
        let seq = CadSequence::new(vec![Command::Extrude(Extrude::default())]);
        assert_eq!(token_stream(&seq).len(), 12);
        assert_eq!(token_stream_with(&seq, Granularity::Command).len(), 1);
    }
}
