//! Errors surfaced by the command-line tool, and their exit codes.

use std::path::PathBuf;

use stagecraft_core::embed::EmbedError;
use stagecraft_core::logic::{DerivationError, LogicError, ModelError};
use stagecraft_core::staged::StagedTypeError;
use stagecraft_core::typing::TypeError;

use crate::syntax::SyntaxError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("malformed file: {0}")]
    Format(String),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("type error: {0}")]
    StagedType(#[from] StagedTypeError),
    #[error("type error: {0}")]
    SourceType(String),
    #[error("evaluation error: no rule applies")]
    Stuck,
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("invalid derivation: {0}")]
    Derivation(#[from] DerivationError),
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("model check failed: {0}")]
    Logic(#[from] LogicError),
    #[error("embedding failed: {0}")]
    Embed(#[from] EmbedError),
    #[error("suite {suite} found {violations} violation(s)")]
    Harness { suite: String, violations: usize },
}

impl CliError {
    /// 1 for errors about the input's meaning, 2 for errors about its form.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Syntax(_) | CliError::Format(_) => 2,
            CliError::Type(_)
            | CliError::StagedType(_)
            | CliError::SourceType(_)
            | CliError::Stuck
            | CliError::FuelExhausted
            | CliError::Derivation(_)
            | CliError::Model(_)
            | CliError::Logic(_)
            | CliError::Embed(_)
            | CliError::Harness { .. } => 1,
        }
    }

    /// Stable name of the error class.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Io { .. } => "Io",
            CliError::Syntax(_) => "SyntaxError",
            CliError::Format(_) => "FormatError",
            CliError::Type(_) | CliError::StagedType(_) | CliError::SourceType(_) => "TypeError",
            CliError::Stuck => "EvalError",
            CliError::FuelExhausted => "FuelExhausted",
            CliError::Derivation(e) => match e.kind {
                stagecraft_core::logic::DerivationErrorKind::RuleMismatch => "RuleMismatch",
                stagecraft_core::logic::DerivationErrorKind::SideConditionFailure => "SideConditionFailure",
                stagecraft_core::logic::DerivationErrorKind::PremiseShapeError => "PremiseShapeError",
            },
            CliError::Model(_) => "ModelError",
            CliError::Logic(_) => "LogicError",
            CliError::Embed(_) => "EmbedError",
            CliError::Harness { .. } => "PropertyViolation",
        }
    }
}
