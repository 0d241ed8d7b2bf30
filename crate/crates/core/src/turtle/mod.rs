//! Turtle subset reader/writer and extraction of Turtle from LLM replies.

mod extract;
mod lexer;
mod parser;
mod writer;

pub use extract::extract_from_response;
pub use parser::{parse_turtle, parse_turtle_bytes};
pub use writer::serialize_turtle;
pub(crate) use writer::{escape_string, Compactor};

/// Annotation property carrying a SWRL rule in surface syntax.
pub const RULE_ANNOTATION: &str = "http://w3id.org/ontowb/vocab#swrlRule";
