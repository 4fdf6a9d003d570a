//! Algorithmic type synthesis for the calculus and its ML-like extension.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use crate::syntax::{Position, Symbol, TVar, Term, Transition, Type, TypingContext, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeErrorKind {
    #[error("variable `{name}` is not in scope")]
    UnboundVariable { name: Symbol },
    #[error("variable `{name}` is used at a stage other than its declaration stage")]
    VarStageMismatch { name: Symbol, declared: Transition, used: Transition },
    #[error("applying a term that is not a function")]
    NotAFunction { found: Type },
    #[error("argument type does not match the parameter type")]
    ArgumentMismatch { expected: Type, found: Type },
    #[error("unquoting a term that is not code at the right transition variable")]
    NotCode { var: TVar, found: Type },
    #[error("unquote is used at a stage that does not end with its transition variable")]
    PrevStageMismatch { var: TVar, stage: Transition },
    #[error("instantiating a term that is not polymorphic")]
    NotForall { found: Type },
    #[error("condition is not a boolean")]
    ConditionNotBool { found: Type },
    #[error("branches have different types")]
    BranchMismatch { then_type: Type, else_type: Type },
    #[error("arithmetic operand is not an integer")]
    ArithNotInt { found: Type },
    #[error("fix annotation is not a function type")]
    FixAnnotationNotArrow { found: Type },
    #[error("fix body does not have the annotated type")]
    FixBodyMismatch { expected: Type, found: Type },
    #[error("dangling bound variable")]
    IllFormed,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} (at {position})")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub position: Position,
}

/// Synthesizes the type of `m` at stage `stage` under `ctx`.
pub fn typecheck(ctx: &TypingContext, stage: &Transition, m: &Term) -> Result<Type, TypeError> {
    let mut avoid = ctx.avoid_set();
    stage.collect_fmv(&mut avoid);
    avoid.extend(m.names());
    Checker { avoid }
        .check(ctx, stage, m)
        .map_err(|(kind, path)| TypeError { kind, position: Position(path.into_iter().rev().collect()) })
}

pub fn restrict_context(ctx: &TypingContext, prefix: &Transition) -> TypingContext {
    ctx.restrict(prefix)
}

pub fn check_epsilon_free(ctx: &TypingContext) -> bool {
    ctx.is_epsilon_free()
}

type Failure = (TypeErrorKind, alloc::vec::Vec<u32>);

fn at<T>(r: Result<T, Failure>, child: u32) -> Result<T, Failure> {
    r.map_err(|(k, mut p)| {
        p.push(child);
        (k, p)
    })
}

fn fail<T>(kind: TypeErrorKind) -> Result<T, Failure> {
    Err((kind, alloc::vec::Vec::new()))
}

struct Checker {
    avoid: BTreeSet<Symbol>,
}

impl Checker {
    fn check(&mut self, ctx: &TypingContext, stage: &Transition, m: &Term) -> Result<Type, Failure> {
        match m {
            Term::Var(Var::Free(x)) => match ctx.get(x) {
                None => fail(TypeErrorKind::UnboundVariable { name: x.clone() }),
                Some((t, a)) if a == stage => Ok(t.clone()),
                Some((_, a)) => {
                    fail(TypeErrorKind::VarStageMismatch { name: x.clone(), declared: a.clone(), used: stage.clone() })
                }
            },
            Term::Var(Var::Bound(_)) => fail(TypeErrorKind::IllFormed),
            Term::Int(_) => Ok(Type::Int),
            Term::Bool(_) => Ok(Type::Bool),
            Term::BinOp(op, l, r) => {
                let tl = at(self.check(ctx, stage, l), 0)?;
                if tl != Type::Int {
                    return at(fail(TypeErrorKind::ArithNotInt { found: tl }), 0);
                }
                let tr = at(self.check(ctx, stage, r), 1)?;
                if tr != Type::Int {
                    return at(fail(TypeErrorKind::ArithNotInt { found: tr }), 1);
                }
                Ok(if *op == crate::syntax::BinOp::Eq { Type::Bool } else { Type::Int })
            }
            Term::If(c, t, e) => {
                let tc = at(self.check(ctx, stage, c), 0)?;
                if tc != Type::Bool {
                    return at(fail(TypeErrorKind::ConditionNotBool { found: tc }), 0);
                }
                let tt = at(self.check(ctx, stage, t), 1)?;
                let te = at(self.check(ctx, stage, e), 2)?;
                if tt != te {
                    return fail(TypeErrorKind::BranchMismatch { then_type: tt, else_type: te });
                }
                Ok(tt)
            }
            Term::Fix(h, ann, body) => {
                if !matches!(ann, Type::Arrow(..)) {
                    return fail(TypeErrorKind::FixAnnotationNotArrow { found: ann.clone() });
                }
                let (f, body) = Term::unbind_term(h, body, &self.avoid);
                self.avoid.insert(f.clone());
                let inner = ctx.extended(f, ann.clone(), stage.clone());
                let tb = at(self.check(&inner, stage, &body), 0)?;
                if &tb != ann {
                    return at(fail(TypeErrorKind::FixBodyMismatch { expected: ann.clone(), found: tb }), 0);
                }
                Ok(ann.clone())
            }
            Term::Lam(h, ann, body) => {
                let (x, body) = Term::unbind_term(h, body, &self.avoid);
                self.avoid.insert(x.clone());
                let inner = ctx.extended(x, ann.clone(), stage.clone());
                let tb = at(self.check(&inner, stage, &body), 0)?;
                Ok(Type::arrow(ann.clone(), tb))
            }
            Term::App(f, a) => {
                let tf = at(self.check(ctx, stage, f), 0)?;
                let (dom, cod) = match tf {
                    Type::Arrow(d, c) => (*d, *c),
                    other => return at(fail(TypeErrorKind::NotAFunction { found: other }), 0),
                };
                let ta = at(self.check(ctx, stage, a), 1)?;
                if ta != dom {
                    return at(fail(TypeErrorKind::ArgumentMismatch { expected: dom, found: ta }), 1);
                }
                Ok(cod)
            }
            Term::Next(v, body) => {
                if matches!(v, TVar::Bound(_)) {
                    return fail(TypeErrorKind::IllFormed);
                }
                let tb = at(self.check(ctx, &stage.pushed(v.clone()), body), 0)?;
                Ok(Type::Code(v.clone(), Box::new(tb)))
            }
            Term::Prev(v, body) => {
                let outer = match stage.split_last() {
                    Some((outer, last)) if last == v => outer,
                    _ => {
                        return fail(TypeErrorKind::PrevStageMismatch { var: v.clone(), stage: stage.clone() });
                    }
                };
                match at(self.check(ctx, &outer, body), 0)? {
                    Type::Code(w, t) if &w == v => Ok(*t),
                    other => at(fail(TypeErrorKind::NotCode { var: v.clone(), found: other }), 0),
                }
            }
            Term::Gen(h, body) => {
                // The fresh name avoids FMV(Γ) and FMV(A), so the side
                // condition of the rule holds by construction.
                let (a, body) = Term::unbind_tvar(h, body, &self.avoid);
                self.avoid.insert(a.clone());
                let tb = at(self.check(ctx, stage, &body), 0)?;
                Ok(Type::Forall(h.clone(), Box::new(tb.close_tvar(&a))))
            }
            Term::TApp(f, b) => match at(self.check(ctx, stage, f), 0)? {
                Type::Forall(_, body) => Ok(body.open_tvar(b)),
                other => at(fail(TypeErrorKind::NotForall { found: other }), 0),
            },
        }
    }
}
