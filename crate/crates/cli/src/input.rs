//! Parsing whole `.mt` documents into each dialect.

use stagecraft_core::embed::{BoxStack, BoxTerm, CircleContext, CircleTerm, LiContext, LiTerm};
use stagecraft_core::staged::{erase, ErasedTerm, StagedContext, StagedTerm, TransitionEnv};
use stagecraft_core::syntax::{TVar, Term, Transition, TypingContext};

use crate::syntax::{convert, parse_document, parse_stage, SyntaxError};

type R<T> = Result<T, SyntaxError>;

/// A `--stage` argument such as `"a b"` or `"[a b]"`.
pub fn stage(src: &str) -> R<Transition> {
    Ok(Transition(parse_stage(src)?.iter().map(|v| TVar::free(v)).collect()))
}

pub fn plain(src: &str) -> R<(TypingContext, Term)> {
    let doc = parse_document(src)?;
    Ok((convert::to_context(&doc.items)?, convert::to_term(&doc.body)?))
}

pub fn staged(src: &str) -> R<(StagedContext, TransitionEnv, StagedTerm)> {
    let doc = parse_document(src)?;
    let (ctx, delta) = convert::to_staged_env(&doc.items)?;
    Ok((ctx, delta, convert::to_staged(&doc.body)?))
}

/// Erased syntax, or a staged term that is erased after parsing.
pub fn erased(src: &str) -> R<ErasedTerm> {
    let doc = parse_document(src)?;
    match convert::to_erased(&doc.body) {
        Ok(m) => Ok(m),
        Err(e) => match convert::to_staged(&doc.body) {
            Ok(m) => Ok(erase(&m)),
            Err(_) => Err(e),
        },
    }
}

pub fn circle(src: &str) -> R<(CircleContext, CircleTerm)> {
    let doc = parse_document(src)?;
    Ok((convert::to_circle_context(&doc.items)?, convert::to_circle(&doc.body)?))
}

pub fn boxed(src: &str) -> R<(BoxStack, BoxTerm)> {
    let doc = parse_document(src)?;
    Ok((convert::to_box_stack(&doc.items)?, convert::to_box(&doc.body)?))
}

pub fn lambda_i(src: &str) -> R<(LiContext, LiTerm)> {
    let doc = parse_document(src)?;
    Ok((convert::to_li_context(&doc.items)?, convert::to_li(&doc.body)?))
}

/// Example programs shipped with the tool.
pub mod examples {
    pub const POWER0: &str = include_str!("../examples/power0.mt");
    pub const POWER1: &str = include_str!("../examples/power1.mt");
    pub const POWER_ALPHA: &str = include_str!("../examples/power_alpha.mt");
    pub const POWER_ALPHA3: &str = include_str!("../examples/power_alpha3.mt");
    pub const POWER2: &str = include_str!("../examples/power2.mt");
    pub const POWER_FORALL: &str = include_str!("../examples/power_forall.mt");
    pub const POWER_FORALL_RUN: &str = include_str!("../examples/power_forall_run.mt");
    pub const DISCRIMINATOR_TERMINATES: &str = include_str!("../examples/discriminator_terminates.mt");
    pub const DISCRIMINATOR_DIVERGES: &str = include_str!("../examples/discriminator_diverges.mt");
}
