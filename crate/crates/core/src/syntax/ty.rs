use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use super::name::{fresh, sym, Hint, Symbol};
use super::path::{TVar, Transition};

/// Types of the calculus; with `Bottom` they double as propositions of the
/// modal logic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Base(Symbol),
    Int,
    Bool,
    Bottom,
    Arrow(Box<Type>, Box<Type>),
    Code(TVar, Box<Type>),
    Forall(Hint, Box<Type>),
}

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Base(sym(name))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn code(v: TVar, t: Type) -> Type {
        Type::Code(v, Box::new(t))
    }

    /// `⟨A⟩τ` as nested single-variable code types.
    pub fn code_at(a: &Transition, t: Type) -> Type {
        a.0.iter().rev().fold(t, |acc, v| Type::code(v.clone(), acc))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Type) -> Type {
        Type::arrow(t, Type::Bottom)
    }

    /// Builds `∀α.τ` by abstracting the free variable `alpha` of `body`.
    pub fn forall(alpha: &str, body: Type) -> Type {
        let a = sym(alpha);
        Type::Forall(Hint(a.clone()), Box::new(body.close_tvar(&a)))
    }

    pub fn map_tvars(&self, depth: u32, f: &mut dyn FnMut(&TVar, u32) -> Option<Transition>) -> Type {
        match self {
            Type::Base(_) | Type::Int | Type::Bool | Type::Bottom => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.map_tvars(depth, f), b.map_tvars(depth, f)),
            Type::Code(v, t) => {
                let body = t.map_tvars(depth, f);
                match f(v, depth) {
                    Some(b) => Type::code_at(&b, body),
                    None => Type::code(v.clone(), body),
                }
            }
            Type::Forall(h, t) => Type::Forall(h.clone(), Box::new(t.map_tvars(depth + 1, f))),
        }
    }

    /// Instantiates the outermost bound transition variable with `b`.
    pub fn open_tvar(&self, b: &Transition) -> Type {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Bound(i) if *i == d => Some(b.clone()),
            _ => None,
        })
    }

    pub fn close_tvar(&self, alpha: &Symbol) -> Type {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Free(s) if s == alpha => Some(Transition::single(TVar::Bound(d))),
            _ => None,
        })
    }

    /// `τ[α := B]`.
    pub fn subst_tvar(&self, alpha: &Symbol, b: &Transition) -> Type {
        self.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) if s == alpha => Some(b.clone()),
            _ => None,
        })
    }

    pub fn collect_fmv(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Type::Base(_) | Type::Int | Type::Bool | Type::Bottom => {}
            Type::Arrow(a, b) => {
                a.collect_fmv(out);
                b.collect_fmv(out);
            }
            Type::Code(v, t) => {
                if let TVar::Free(s) = v {
                    out.insert(s.clone());
                }
                t.collect_fmv(out);
            }
            Type::Forall(_, t) => t.collect_fmv(out),
        }
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_fmv(&mut out);
        out
    }

    /// Opens a `∀` body with a fresh named variable avoiding `avoid`.
    pub fn unbind(hint: &Hint, body: &Type, avoid: &BTreeSet<Symbol>) -> (Symbol, Type) {
        let mut avoid = avoid.clone();
        body.collect_fmv(&mut avoid);
        let a = fresh(hint.as_str(), &avoid);
        let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
        (a, opened)
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Base(_) | Type::Int | Type::Bool | Type::Bottom => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Code(_, t) | Type::Forall(_, t) => 1 + t.size(),
        }
    }

    pub fn has_forall(&self) -> bool {
        match self {
            Type::Base(_) | Type::Int | Type::Bool | Type::Bottom => false,
            Type::Arrow(a, b) => a.has_forall() || b.has_forall(),
            Type::Code(_, t) => t.has_forall(),
            Type::Forall(..) => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> TVar {
        TVar::free("a")
    }

    #[test]
    fn subst_epsilon_deletes_code() {
        // (<a> forall a. <a> b)[a := eps] = forall a. <a> b
        let inner = Type::forall("a", Type::code(a(), Type::base("b")));
        let t = Type::code(a(), inner.clone());
        assert_eq!(t.subst_tvar(&sym("a"), &Transition::epsilon()), inner);
    }

    #[test]
    fn subst_under_binder_avoids_capture() {
        // (forall a. <b> b)[b := a a] = forall a'. <a><a> b
        let t = Type::forall("a", Type::code(TVar::free("b"), Type::base("b")));
        let r = t.subst_tvar(&sym("b"), &Transition::from_names(&["a", "a"]));
        let expect = Type::forall("c", Type::code(a(), Type::code(a(), Type::base("b"))));
        assert_eq!(r, expect);
        assert_eq!(r.fmv(), [sym("a")].into_iter().collect());
    }

    #[test]
    fn alpha_equivalence_is_equality() {
        let t1 = Type::forall("a", Type::code(a(), Type::base("b")));
        let t2 = Type::forall("z", Type::code(TVar::free("z"), Type::base("b")));
        assert_eq!(t1, t2);
        let t3 = Type::forall("z", Type::code(a(), Type::base("b")));
        assert_ne!(t1, t3);
    }
}
