use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{embed_base, EmbedError};
use crate::syntax::{fresh, sym, Hint, Symbol, TVar, Term, Transition, Type, TypingContext, Var};

/// Types of the linear-time calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircleType {
    Base(Symbol),
    Arrow(Box<CircleType>, Box<CircleType>),
    /// `○τ`
    Circle(Box<CircleType>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircleTerm {
    Var(Var),
    Lam(Hint, CircleType, Box<CircleTerm>),
    App(Box<CircleTerm>, Box<CircleTerm>),
    Next(Box<CircleTerm>),
    Prev(Box<CircleTerm>),
}

/// Variables with their types and levels.
pub type CircleContext = BTreeMap<Symbol, (CircleType, usize)>;

impl CircleType {
    pub fn arrow(a: CircleType, b: CircleType) -> CircleType {
        CircleType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn circle(a: CircleType) -> CircleType {
        CircleType::Circle(Box::new(a))
    }
}

impl CircleTerm {
    pub fn var(x: &str) -> CircleTerm {
        CircleTerm::Var(Var::Free(sym(x)))
    }

    pub fn lam(x: &str, t: CircleType, body: CircleTerm) -> CircleTerm {
        let s = sym(x);
        CircleTerm::Lam(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    pub fn app(m: CircleTerm, n: CircleTerm) -> CircleTerm {
        CircleTerm::App(Box::new(m), Box::new(n))
    }

    pub fn next(m: CircleTerm) -> CircleTerm {
        CircleTerm::Next(Box::new(m))
    }

    pub fn prev(m: CircleTerm) -> CircleTerm {
        CircleTerm::Prev(Box::new(m))
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<CircleTerm>) -> CircleTerm {
        match self {
            CircleTerm::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            CircleTerm::Lam(h, t, m) => CircleTerm::Lam(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            CircleTerm::App(m, n) => CircleTerm::app(m.map_vars(depth, f), n.map_vars(depth, f)),
            CircleTerm::Next(m) => CircleTerm::next(m.map_vars(depth, f)),
            CircleTerm::Prev(m) => CircleTerm::prev(m.map_vars(depth, f)),
        }
    }

    pub fn open_term(&self, n: &CircleTerm) -> CircleTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> CircleTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(CircleTerm::Var(Var::Bound(d))),
            _ => None,
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.map_vars(0, &mut |v, _| {
            if let Var::Free(s) = v {
                out.insert(s.clone());
            }
            None
        });
        out
    }

    /// All one-step reducts: `β` and `prev (next M) → M`, anywhere.
    pub fn reducts(&self) -> Vec<CircleTerm> {
        let mut out = Vec::new();
        match self {
            CircleTerm::Var(_) => {}
            CircleTerm::Lam(h, t, m) => {
                let x = fresh(h.as_str(), &m.free_vars());
                let opened = m.open_term(&CircleTerm::Var(Var::Free(x.clone())));
                out.extend(
                    opened
                        .reducts()
                        .into_iter()
                        .map(|r| CircleTerm::Lam(h.clone(), t.clone(), Box::new(r.close_term(&x)))),
                );
            }
            CircleTerm::App(m, n) => {
                if let CircleTerm::Lam(_, _, body) = &**m {
                    out.push(body.open_term(n));
                }
                out.extend(m.reducts().into_iter().map(|r| CircleTerm::app(r, (**n).clone())));
                out.extend(n.reducts().into_iter().map(|r| CircleTerm::app((**m).clone(), r)));
            }
            CircleTerm::Next(m) => out.extend(m.reducts().into_iter().map(CircleTerm::next)),
            CircleTerm::Prev(m) => {
                if let CircleTerm::Next(inner) = &**m {
                    out.push((**inner).clone());
                }
                out.extend(m.reducts().into_iter().map(CircleTerm::prev));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        match self {
            CircleTerm::Var(_) => 1,
            CircleTerm::Lam(_, _, m) | CircleTerm::Next(m) | CircleTerm::Prev(m) => 1 + m.size(),
            CircleTerm::App(m, n) => 1 + m.size() + n.size(),
        }
    }
}

/// `Γ ⊢^n M : τ` in the linear-time calculus.
pub fn circle_typecheck(ctx: &CircleContext, level: usize, m: &CircleTerm) -> Option<CircleType> {
    match m {
        CircleTerm::Var(Var::Free(x)) => match ctx.get(x) {
            Some((t, n)) if *n == level => Some(t.clone()),
            _ => None,
        },
        CircleTerm::Var(Var::Bound(_)) => None,
        CircleTerm::Lam(h, t, body) => {
            let mut avoid: BTreeSet<Symbol> = ctx.keys().cloned().collect();
            avoid.extend(body.free_vars());
            let x = fresh(h.as_str(), &avoid);
            let mut inner = ctx.clone();
            inner.insert(x.clone(), (t.clone(), level));
            let tb = circle_typecheck(&inner, level, &body.open_term(&CircleTerm::Var(Var::Free(x))))?;
            Some(CircleType::arrow(t.clone(), tb))
        }
        CircleTerm::App(f, a) => match circle_typecheck(ctx, level, f)? {
            CircleType::Arrow(d, c) if circle_typecheck(ctx, level, a)? == *d => Some(*c),
            _ => None,
        },
        CircleTerm::Next(body) => Some(CircleType::circle(circle_typecheck(ctx, level + 1, body)?)),
        CircleTerm::Prev(body) => match circle_typecheck(ctx, level.checked_sub(1)?, body)? {
            CircleType::Circle(t) => Some(*t),
            _ => None,
        },
    }
}

pub fn embed_circle_type(t: &CircleType, alpha: &TVar) -> Type {
    match t {
        CircleType::Base(b) => embed_base(b),
        CircleType::Arrow(a, b) => Type::arrow(embed_circle_type(a, alpha), embed_circle_type(b, alpha)),
        CircleType::Circle(a) => Type::code(alpha.clone(), embed_circle_type(a, alpha)),
    }
}

/// Level `n` becomes the stage `α^n`.
pub fn circle_stage(n: usize, alpha: &TVar) -> Transition {
    Transition(alloc::vec![alpha.clone(); n])
}

pub fn embed_circle_context(ctx: &CircleContext, alpha: &TVar) -> TypingContext {
    ctx.iter().map(|(x, (t, n))| (x.clone(), (embed_circle_type(t, alpha), circle_stage(*n, alpha)))).collect()
}

pub fn embed_circle(m: &CircleTerm, alpha: &TVar) -> Term {
    match m {
        CircleTerm::Var(v) => Term::Var(v.clone()),
        CircleTerm::Lam(h, t, body) => {
            Term::Lam(h.clone(), embed_circle_type(t, alpha), Box::new(embed_circle(body, alpha)))
        }
        CircleTerm::App(f, a) => Term::app(embed_circle(f, alpha), embed_circle(a, alpha)),
        CircleTerm::Next(body) => Term::Next(alpha.clone(), Box::new(embed_circle(body, alpha))),
        CircleTerm::Prev(body) => Term::Prev(alpha.clone(), Box::new(embed_circle(body, alpha))),
    }
}

fn forget_type(t: &Type) -> Result<CircleType, EmbedError> {
    match t {
        Type::Base(b) => Ok(CircleType::Base(b.clone())),
        Type::Int => Ok(CircleType::Base(sym("int"))),
        Type::Bool => Ok(CircleType::Base(sym("bool"))),
        Type::Arrow(a, b) => Ok(CircleType::arrow(forget_type(a)?, forget_type(b)?)),
        Type::Code(_, a) => Ok(CircleType::circle(forget_type(a)?)),
        Type::Forall(..) => Err(EmbedError::NotQuantifierFree),
        Type::Bottom => Err(EmbedError::NotInFragment),
    }
}

/// Drops transition annotations from a quantifier-free term.
pub fn forget_to_circle(m: &Term) -> Result<CircleTerm, EmbedError> {
    match m {
        Term::Var(v) => Ok(CircleTerm::Var(v.clone())),
        Term::Lam(h, t, body) => Ok(CircleTerm::Lam(h.clone(), forget_type(t)?, Box::new(forget_to_circle(body)?))),
        Term::App(f, a) => Ok(CircleTerm::app(forget_to_circle(f)?, forget_to_circle(a)?)),
        Term::Next(_, body) => Ok(CircleTerm::next(forget_to_circle(body)?)),
        Term::Prev(_, body) => Ok(CircleTerm::prev(forget_to_circle(body)?)),
        Term::Gen(..) | Term::TApp(..) => Err(EmbedError::NotQuantifierFree),
        Term::Int(_) | Term::Bool(_) | Term::BinOp(..) | Term::If(..) | Term::Fix(..) => Err(EmbedError::NotInFragment),
    }
}
