//! Terms, types, transitions and paths in locally nameless form.

mod context;
mod name;
mod path;
mod term;
mod ty;

pub use context::TypingContext;
pub use name::{fresh, sym, Hint, Symbol};
pub use path::{as_positive, path_concat, path_inverse, path_leq, Letter, Path, TVar, Transition};
pub use term::{BinOp, Position, Term, Var};
pub use ty::Type;

/// Alpha-equivalence; with locally nameless syntax this is equality.
pub fn alpha_equiv<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}
