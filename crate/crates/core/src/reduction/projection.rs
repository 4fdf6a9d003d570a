use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::syntax::{Hint, Term, Var};

/// Untyped λ-terms: the image of the `♮` projection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bare {
    Var(Var),
    Lam(Hint, Box<Bare>),
    App(Box<Bare>, Box<Bare>),
}

/// `♮(M)`: forgets quotes, unquotes, generalization and instantiation.
/// Defined on the pure fragment; `None` when `M` uses ML-like constructs.
pub fn natural_projection(m: &Term) -> Option<Bare> {
    Some(match m {
        Term::Var(v) => Bare::Var(v.clone()),
        Term::Lam(h, _, body) => Bare::Lam(h.clone(), Box::new(natural_projection(body)?)),
        Term::App(f, a) => Bare::App(Box::new(natural_projection(f)?), Box::new(natural_projection(a)?)),
        Term::Next(_, body) | Term::Prev(_, body) | Term::Gen(_, body) | Term::TApp(body, _) => {
            natural_projection(body)?
        }
        Term::Int(_) | Term::Bool(_) | Term::BinOp(..) | Term::If(..) | Term::Fix(..) => return None,
    })
}

impl Bare {
    fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<Bare>) -> Bare {
        match self {
            Bare::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            Bare::Lam(h, b) => Bare::Lam(h.clone(), Box::new(b.map_vars(depth + 1, f))),
            Bare::App(a, b) => Bare::App(Box::new(a.map_vars(depth, f)), Box::new(b.map_vars(depth, f))),
        }
    }

    pub fn open(&self, n: &Bare) -> Bare {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close(&self, x: &crate::syntax::Symbol) -> Bare {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(Bare::Var(Var::Bound(d))),
            _ => None,
        })
    }

    /// All one-step β-reducts.
    pub fn beta_reducts(&self) -> Vec<Bare> {
        let mut out = Vec::new();
        match self {
            Bare::Var(_) => {}
            Bare::Lam(h, b) => {
                let x = crate::syntax::fresh(h.as_str(), &b.free_vars());
                let opened = b.open(&Bare::Var(Var::Free(x.clone())));
                for r in opened.beta_reducts() {
                    out.push(Bare::Lam(h.clone(), Box::new(r.close(&x))));
                }
            }
            Bare::App(f, a) => {
                if let Bare::Lam(_, body) = &**f {
                    out.push(body.open(a));
                }
                for r in f.beta_reducts() {
                    out.push(Bare::App(Box::new(r), a.clone()));
                }
                for r in a.beta_reducts() {
                    out.push(Bare::App(f.clone(), Box::new(r)));
                }
            }
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<crate::syntax::Symbol> {
        let mut out = BTreeSet::new();
        fn go(b: &Bare, out: &mut BTreeSet<crate::syntax::Symbol>) {
            match b {
                Bare::Var(Var::Free(s)) => {
                    out.insert(s.clone());
                }
                Bare::Var(_) => {}
                Bare::Lam(_, x) => go(x, out),
                Bare::App(x, y) => {
                    go(x, out);
                    go(y, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Transition, Type};

    #[test]
    fn examples() {
        let id = Term::lam("x", Type::base("b"), Term::var("x"));
        let bare_id = natural_projection(&id).unwrap();
        assert_eq!(natural_projection(&Term::gen("a", Term::next("a", id.clone()))).unwrap(), bare_id);
        assert_eq!(
            natural_projection(&Term::prev("a", Term::next("a", Term::var("z")))).unwrap(),
            Bare::Var(Var::Free(crate::sym("z")))
        );
        let run = Term::tapp(Term::gen("a", Term::next("a", Term::var("y"))), Transition::epsilon());
        assert_eq!(natural_projection(&run).unwrap(), Bare::Var(Var::Free(crate::sym("y"))));
        assert!(natural_projection(&Term::int(1)).is_none());
    }
}
