use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{embed_base, EmbedError};
use crate::syntax::{fresh, sym, Hint, Symbol, TVar, Term, Transition, Type, TypingContext, Var};

/// Types of the Kripke-style modal calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxType {
    Base(Symbol),
    Arrow(Box<BoxType>, Box<BoxType>),
    /// `□τ`
    Square(Box<BoxType>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxTerm {
    Var(Var),
    Lam(Hint, BoxType, Box<BoxTerm>),
    App(Box<BoxTerm>, Box<BoxTerm>),
    Box(Box<BoxTerm>),
    /// `unbox_n M`
    Unbox(usize, Box<BoxTerm>),
}

/// `Γ0; …; Γn`, innermost last.
pub type BoxStack = Vec<BTreeMap<Symbol, BoxType>>;

impl BoxType {
    pub fn arrow(a: BoxType, b: BoxType) -> BoxType {
        BoxType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn square(a: BoxType) -> BoxType {
        BoxType::Square(Box::new(a))
    }
}

impl BoxTerm {
    pub fn var(x: &str) -> BoxTerm {
        BoxTerm::Var(Var::Free(sym(x)))
    }

    pub fn lam(x: &str, t: BoxType, body: BoxTerm) -> BoxTerm {
        let s = sym(x);
        BoxTerm::Lam(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    pub fn app(m: BoxTerm, n: BoxTerm) -> BoxTerm {
        BoxTerm::App(Box::new(m), Box::new(n))
    }

    pub fn boxed(m: BoxTerm) -> BoxTerm {
        BoxTerm::Box(Box::new(m))
    }

    pub fn unbox(n: usize, m: BoxTerm) -> BoxTerm {
        BoxTerm::Unbox(n, Box::new(m))
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<BoxTerm>) -> BoxTerm {
        match self {
            BoxTerm::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            BoxTerm::Lam(h, t, m) => BoxTerm::Lam(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            BoxTerm::App(m, n) => BoxTerm::app(m.map_vars(depth, f), n.map_vars(depth, f)),
            BoxTerm::Box(m) => BoxTerm::boxed(m.map_vars(depth, f)),
            BoxTerm::Unbox(k, m) => BoxTerm::unbox(*k, m.map_vars(depth, f)),
        }
    }

    pub fn open_term(&self, n: &BoxTerm) -> BoxTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> BoxTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(BoxTerm::Var(Var::Bound(d))),
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

    /// One-step `β` reducts, anywhere.
    pub fn beta_reducts(&self) -> Vec<BoxTerm> {
        let mut out = Vec::new();
        match self {
            BoxTerm::Var(_) => {}
            BoxTerm::Lam(h, t, m) => {
                let x = fresh(h.as_str(), &m.free_vars());
                let opened = m.open_term(&BoxTerm::Var(Var::Free(x.clone())));
                out.extend(
                    opened
                        .beta_reducts()
                        .into_iter()
                        .map(|r| BoxTerm::Lam(h.clone(), t.clone(), Box::new(r.close_term(&x)))),
                );
            }
            BoxTerm::App(m, n) => {
                if let BoxTerm::Lam(_, _, body) = &**m {
                    out.push(body.open_term(n));
                }
                out.extend(m.beta_reducts().into_iter().map(|r| BoxTerm::app(r, (**n).clone())));
                out.extend(n.beta_reducts().into_iter().map(|r| BoxTerm::app((**m).clone(), r)));
            }
            BoxTerm::Box(m) => out.extend(m.beta_reducts().into_iter().map(BoxTerm::boxed)),
            BoxTerm::Unbox(k, m) => out.extend(m.beta_reducts().into_iter().map(|r| BoxTerm::unbox(*k, r))),
        }
        out
    }

    pub fn size(&self) -> usize {
        match self {
            BoxTerm::Var(_) => 1,
            BoxTerm::Lam(_, _, m) | BoxTerm::Box(m) | BoxTerm::Unbox(_, m) => 1 + m.size(),
            BoxTerm::App(m, n) => 1 + m.size() + n.size(),
        }
    }
}

/// `Γ0; …; Γn ⊢ M : τ`; variables are looked up in `Γn` only.
pub fn box_typecheck(stack: &BoxStack, m: &BoxTerm) -> Option<BoxType> {
    let top = stack.last()?;
    match m {
        BoxTerm::Var(Var::Free(x)) => top.get(x).cloned(),
        BoxTerm::Var(Var::Bound(_)) => None,
        BoxTerm::Lam(h, t, body) => {
            let mut avoid: BTreeSet<Symbol> = stack.iter().flat_map(|g| g.keys().cloned()).collect();
            avoid.extend(body.free_vars());
            let x = fresh(h.as_str(), &avoid);
            let mut inner = stack.clone();
            inner.last_mut()?.insert(x.clone(), t.clone());
            let tb = box_typecheck(&inner, &body.open_term(&BoxTerm::Var(Var::Free(x))))?;
            Some(BoxType::arrow(t.clone(), tb))
        }
        BoxTerm::App(f, a) => match box_typecheck(stack, f)? {
            BoxType::Arrow(d, c) if box_typecheck(stack, a)? == *d => Some(*c),
            _ => None,
        },
        BoxTerm::Box(body) => {
            let mut inner = stack.clone();
            inner.push(BTreeMap::new());
            Some(BoxType::square(box_typecheck(&inner, body)?))
        }
        BoxTerm::Unbox(k, body) => {
            let keep = stack.len().checked_sub(*k)?;
            match box_typecheck(&stack[..keep].to_vec(), body)? {
                BoxType::Square(t) => Some(*t),
                _ => None,
            }
        }
    }
}

pub fn embed_box_type(t: &BoxType) -> Type {
    match t {
        BoxType::Base(b) => embed_base(b),
        BoxType::Arrow(a, b) => Type::arrow(embed_box_type(a), embed_box_type(b)),
        BoxType::Square(a) => {
            let inner = embed_box_type(a);
            let alpha = fresh("a", &inner.fmv());
            Type::forall(&alpha, Type::code(TVar::Free(alpha.clone()), inner))
        }
    }
}

/// `Γi` is placed at the prefix `α1…αi` of `A`.
pub fn embed_box_context(stack: &BoxStack, a: &Transition) -> Result<TypingContext, EmbedError> {
    if stack.len() != a.len() + 1 {
        return Err(EmbedError::StackTooShallow { needed: stack.len().saturating_sub(1), depth: a.len() });
    }
    let mut ctx = TypingContext::new();
    for (i, g) in stack.iter().enumerate() {
        let stage = Transition(a.vars()[..i].to_vec());
        for (x, t) in g {
            ctx.insert(x.clone(), embed_box_type(t), stage.clone());
        }
    }
    Ok(ctx)
}

/// `⟦M⟧^A`, where `A` lists distinct variables, one per enclosing box.
pub fn embed_box(m: &BoxTerm, a: &Transition) -> Result<Term, EmbedError> {
    match m {
        BoxTerm::Var(v) => Ok(Term::Var(v.clone())),
        BoxTerm::Lam(h, t, body) => Ok(Term::Lam(h.clone(), embed_box_type(t), Box::new(embed_box(body, a)?))),
        BoxTerm::App(f, x) => Ok(Term::app(embed_box(f, a)?, embed_box(x, a)?)),
        BoxTerm::Box(body) => {
            let alpha = fresh("a", &a.fmv());
            let inner = embed_box(body, &a.pushed(TVar::Free(alpha.clone())))?;
            Ok(Term::gen(&alpha, Term::next(&alpha, inner)))
        }
        BoxTerm::Unbox(k, body) => {
            if *k > a.len() {
                return Err(EmbedError::StackTooShallow { needed: *k, depth: a.len() });
            }
            let split = a.len() - k;
            let outer = Transition(a.vars()[..split].to_vec());
            let b = Transition(a.vars()[split..].to_vec());
            Ok(Term::prev_at(&b, Term::tapp(embed_box(body, &outer)?, b.clone())))
        }
    }
}
