//! Translations into the calculus from the linear-time calculus, the
//! Kripke-style modal calculus and the classifier calculus without
//! cross-stage persistence, and the reverse map to the linear-time one.

mod boxed;
mod circle;
mod lambda_i;

pub use boxed::{box_typecheck, embed_box, embed_box_context, embed_box_type, BoxStack, BoxTerm, BoxType};
pub use circle::{
    circle_stage, circle_typecheck, embed_circle, embed_circle_context, embed_circle_type, forget_to_circle,
    CircleContext, CircleTerm, CircleType,
};
pub use lambda_i::{embed_lambda_i, embed_li_context, embed_li_type, li_typecheck, LiContext, LiTerm, LiType};

/// Source base types `int` and `bool` denote the built-in ones.
fn embed_base(b: &crate::syntax::Symbol) -> crate::syntax::Type {
    match &**b {
        "int" => crate::syntax::Type::Int,
        "bool" => crate::syntax::Type::Bool,
        _ => crate::syntax::Type::Base(b.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("term uses transition quantification")]
    NotQuantifierFree,
    #[error("term uses constructs outside the source calculus")]
    NotInFragment,
    #[error("unbox needs {needed} enclosing stages but only {depth} are available")]
    StackTooShallow { needed: usize, depth: usize },
    #[error("cross-stage persistence has no translation")]
    CspPresent,
    #[error("a type or classifier annotation is missing")]
    MissingAnnotation,
}
