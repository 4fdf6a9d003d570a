//! Concrete syntax: lexing, parsing, printing and per-dialect conversion.

pub mod convert;
pub mod lexer;
pub mod print;
pub mod surface;

pub use lexer::{Pos, SyntaxError};
pub use print::{document_to_string, node_to_string, stage_to_string, type_to_string};
pub use surface::{parse_document, parse_stage, parse_type, Document, Item, Node, SType};
