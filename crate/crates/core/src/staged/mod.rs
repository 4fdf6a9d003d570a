//! Staged transition variables: a type system that tracks where each
//! transition variable is declared, and the erasure of transition
//! annotations that it justifies.

mod erase;
mod syntax;
mod typing;

pub use erase::{erase, erased_eval, ErasedResult, ErasedTerm};
pub use syntax::{StagedContext, StagedTerm, StagedType, TransitionEnv};
pub use typing::{
    staged_typecheck, wf, wf_context, wf_env, wf_transition, wf_type, StagedTypeError, StagedTypeErrorKind, WfReason,
    WfSubject,
};
