//! Command-sequence domain model: types, text and JSON formats, structural
//! validation, quantization, and token flattening.

mod command;
mod json;
pub mod quant;
mod text;
mod tokens;
mod validate;

pub use command::{BooleanOp, CadSequence, Command, CommandType, ExtentType, Extrude, ParamName};
pub use json::{from_json, to_json, JsonError};
pub use quant::{dequantize, quantize, ContinuousCommand, ContinuousExtrude, ContinuousSequence, RangeError};
pub use text::{parse_ccs, serialize_ccs, ParseError};
pub use tokens::{token_stream, token_stream_with, Granularity, Token};
pub use validate::{validate, Issue, IssueCode, ValidationResult};
