//! Library side of the `stagecraft` command-line tool.
#![allow(clippy::result_large_err)]

pub mod commands;
pub mod error;
pub mod formats;
pub mod harness;
pub mod input;
pub mod proofs;
pub mod syntax;
