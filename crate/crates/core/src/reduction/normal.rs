use alloc::collections::BTreeSet;

use super::redexes;
use crate::syntax::{fresh, Path, Symbol, TVar, Term, Transition};

fn erase_all(t: &Path, delta: &BTreeSet<Symbol>) -> Path {
    Path::from_letters(t.letters().iter().filter(|l| !matches!(&l.var, TVar::Free(s) if delta.contains(s))).cloned())
}

/// `Δ ⊢ ▽^T M`. Besides variables, applications and instantiations, every
/// shape that cannot be the head of a redex counts as neutral: Prev (it is
/// only ever consumed by a matching Next, which would have to come from
/// below) and the ML-like constructs.
pub fn is_t_neutral(delta: &BTreeSet<Symbol>, t: &Path, m: &Term) -> bool {
    if !Path::epsilon().leq(&erase_all(t, delta)) {
        return true;
    }
    !matches!(m, Term::Lam(..) | Term::Next(..) | Term::Gen(..))
}

/// `Δ ⊢ ⇓^T M`: the inductive characterization of T-normal terms.
pub fn is_t_normal(delta: &BTreeSet<Symbol>, t: &Path, m: &Term) -> bool {
    match m {
        Term::Var(_) | Term::Int(_) | Term::Bool(_) => true,
        Term::BinOp(_, l, r) => is_t_normal(delta, t, l) && is_t_normal(delta, t, r),
        Term::If(c, th, el) => is_t_normal(delta, t, c) && is_t_normal(delta, t, th) && is_t_normal(delta, t, el),
        Term::Fix(h, _, body) | Term::Lam(h, _, body) => {
            let (_, opened) = Term::unbind_term(h, body, &BTreeSet::new());
            is_t_normal(delta, t, &opened)
        }
        Term::App(f, a) => is_t_normal(delta, t, f) && is_t_neutral(delta, t, f) && is_t_normal(delta, t, a),
        Term::Next(v, body) => {
            let inner = Path::inv_var(v.clone()).concat(t);
            is_t_normal(delta, &inner, body)
        }
        Term::Prev(v, body) => {
            let inner = Path::var(v.clone()).concat(t);
            is_t_normal(delta, &inner, body) && is_t_neutral(delta, &inner, body)
        }
        Term::Gen(h, body) => {
            let mut avoid = t.fmv();
            avoid.extend(delta.iter().cloned());
            body.collect_fmv(&mut avoid);
            let a = fresh(h.as_str(), &avoid);
            let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
            let mut inner = delta.clone();
            inner.insert(a);
            is_t_normal(&inner, t, &opened)
        }
        Term::TApp(f, _) => is_t_normal(delta, t, f) && is_t_neutral(delta, t, f),
    }
}

/// The direct definition: no step `M →^U N` with `U[Δ:=ε] ≤ T[Δ:=ε]`.
pub fn is_t_normal_direct(delta: &BTreeSet<Symbol>, t: &Path, m: &Term) -> bool {
    let t = erase_all(t, delta);
    redexes(m).iter().all(|s| !erase_all(&s.path, delta).leq(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Type, TypingContext};
    use crate::typing::typecheck;

    fn id() -> Term {
        Term::lam("x", Type::base("b"), Term::var("x"))
    }

    fn none() -> BTreeSet<Symbol> {
        BTreeSet::new()
    }

    #[test]
    fn examples() {
        let a = Path::var(TVar::free("a"));
        assert!(is_t_normal(&none(), &a, &Term::var("x")));
        assert!(!is_t_normal(&none(), &Path::epsilon(), &Term::app(id(), Term::var("y"))));
        let m = Term::next("a", Term::app(id(), Term::var("y")));
        assert!(is_t_normal(&none(), &Path::epsilon(), &m));
        assert!(!is_t_normal(&none(), &a, &m));
        assert!(is_t_normal_direct(&none(), &Path::epsilon(), &m));
        assert!(!is_t_normal_direct(&none(), &a, &m));
    }

    #[test]
    fn nested_prev_is_normal() {
        // prev[a] (prev[c] y) with y : <c><a> b at eps has no redex at all
        let b = Type::base("b");
        let ctx = TypingContext::new().with(
            "y",
            Type::code(TVar::free("c"), Type::code(TVar::free("a"), b.clone())),
            Transition::epsilon(),
        );
        let m = Term::prev("a", Term::prev("c", Term::var("y")));
        assert_eq!(typecheck(&ctx, &Transition::from_names(&["c", "a"]), &m).unwrap(), b);
        assert!(is_t_normal_direct(&none(), &Path::epsilon(), &m));
        assert!(is_t_normal(&none(), &Path::epsilon(), &m));
    }

    #[test]
    fn quote_redex_and_inverse_paths() {
        let m = Term::prev("a", Term::next("a", Term::var("z")));
        let inv = Path::inv_var(TVar::free("a"));
        assert!(!is_t_normal(&none(), &Path::epsilon(), &m));
        assert!(!is_t_normal(&none(), &inv, &m));
        let before = Path::inv_var(TVar::free("c"));
        assert!(is_t_normal(&none(), &before, &m));
        assert!(is_t_normal_direct(&none(), &before, &m));
    }
}
