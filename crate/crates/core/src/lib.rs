//! Core of the stagecraft workbench: a multi-stage lambda calculus with
//! transition variables, its ML-like extension, a staged type system with
//! erasure, the corresponding modal logic, and embeddings of related calculi.
//!
//! Everything here is `no_std` (with `alloc`) and purely functional.

#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod embed;
pub mod eval;
pub mod gen;
pub mod logic;
pub mod reduction;
pub mod staged;
pub mod syntax;
pub mod typing;

pub use syntax::{sym, BinOp, Hint, Path, Position, Symbol, TVar, Term, Transition, Type, TypingContext, Var};
