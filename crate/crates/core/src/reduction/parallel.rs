use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::cancel_quotes;
use crate::syntax::{sym, Symbol, TVar, Term, Transition, Var};

/// `M*`, contracting every redex of `M` at once.
pub fn complete_development(m: &Term) -> Term {
    match m {
        Term::Var(_) | Term::Int(_) | Term::Bool(_) => m.clone(),
        Term::BinOp(op, l, r) => Term::binop(*op, complete_development(l), complete_development(r)),
        Term::If(c, t, e) => Term::if_(complete_development(c), complete_development(t), complete_development(e)),
        Term::Fix(h, ty, body) => {
            let (x, opened) = Term::unbind_term(h, body, &BTreeSet::new());
            Term::Fix(h.clone(), ty.clone(), Box::new(complete_development(&opened).close_term(&x)))
        }
        Term::Lam(h, ty, body) => {
            let (x, opened) = Term::unbind_term(h, body, &BTreeSet::new());
            Term::Lam(h.clone(), ty.clone(), Box::new(complete_development(&opened).close_term(&x)))
        }
        Term::App(f, a) => match &**f {
            Term::Lam(h, _, body) => {
                let (x, opened) = Term::unbind_term(h, body, &a.free_vars());
                complete_development(&opened).subst_term(&x, &complete_development(a))
            }
            _ => Term::app(complete_development(f), complete_development(a)),
        },
        Term::Next(v, body) => Term::Next(v.clone(), Box::new(complete_development(body))),
        Term::Prev(v, body) => match cancel_quotes(m) {
            Some(inner) => complete_development(inner),
            None => Term::Prev(v.clone(), Box::new(complete_development(body))),
        },
        Term::Gen(h, body) => {
            let (a, opened) = Term::unbind_tvar(h, body, &BTreeSet::new());
            Term::Gen(h.clone(), Box::new(complete_development(&opened).close_tvar(&a)))
        }
        Term::TApp(f, b) => match &**f {
            Term::Gen(h, body) => {
                let (a, opened) = Term::unbind_tvar(h, body, &b.fmv());
                complete_development(&opened).subst_tvar(&a, b)
            }
            _ => Term::tapp(complete_development(f), b.clone()),
        },
    }
}

/// Every `N` with `M ⇛ N`, without duplicates.
pub fn parallel_reducts(m: &Term) -> Vec<Term> {
    let mut out = reducts(m);
    out.sort();
    out.dedup();
    out
}

fn reducts(m: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match m {
        Term::Var(_) | Term::Int(_) | Term::Bool(_) => out.push(m.clone()),
        Term::BinOp(op, l, r) => {
            let rs = reducts(r);
            for l2 in reducts(l) {
                for r2 in &rs {
                    out.push(Term::binop(*op, l2.clone(), r2.clone()));
                }
            }
        }
        Term::If(c, t, e) => {
            let ts = reducts(t);
            let es = reducts(e);
            for c2 in reducts(c) {
                for t2 in &ts {
                    for e2 in &es {
                        out.push(Term::if_(c2.clone(), t2.clone(), e2.clone()));
                    }
                }
            }
        }
        Term::Fix(h, ty, body) | Term::Lam(h, ty, body) => {
            let (x, opened) = Term::unbind_term(h, body, &BTreeSet::new());
            for b in reducts(&opened) {
                let b = Box::new(b.close_term(&x));
                out.push(if matches!(m, Term::Fix(..)) {
                    Term::Fix(h.clone(), ty.clone(), b)
                } else {
                    Term::Lam(h.clone(), ty.clone(), b)
                });
            }
        }
        Term::App(f, a) => {
            let as_ = reducts(a);
            for f2 in reducts(f) {
                for a2 in &as_ {
                    out.push(Term::app(f2.clone(), a2.clone()));
                }
            }
            if let Term::Lam(h, _, body) = &**f {
                let (x, opened) = Term::unbind_term(h, body, &a.free_vars());
                for b in reducts(&opened) {
                    for a2 in &as_ {
                        out.push(b.subst_term(&x, a2));
                    }
                }
            }
        }
        Term::Next(v, body) => {
            for b in reducts(body) {
                out.push(Term::Next(v.clone(), Box::new(b)));
            }
        }
        Term::Prev(v, body) => {
            for b in reducts(body) {
                out.push(Term::Prev(v.clone(), Box::new(b)));
            }
            if let Some(inner) = cancel_quotes(m) {
                out.extend(reducts(inner));
            }
        }
        Term::Gen(h, body) => {
            let (a, opened) = Term::unbind_tvar(h, body, &BTreeSet::new());
            for b in reducts(&opened) {
                out.push(Term::Gen(h.clone(), Box::new(b.close_tvar(&a))));
            }
        }
        Term::TApp(f, b) => {
            for f2 in reducts(f) {
                out.push(Term::tapp(f2, b.clone()));
            }
            if let Term::Gen(h, body) = &**f {
                let (a, opened) = Term::unbind_tvar(h, body, &b.fmv());
                for r in reducts(&opened) {
                    out.push(r.subst_tvar(&a, b));
                }
            }
        }
    }
    out
}

/// Decides `M ⇛ N`.
///
/// The search walks `M` and `N` together. A β or instantiation step in `M`
/// turns into a pending substitution that is applied to the rest of the
/// walk; the argument of a β step is matched lazily at the first occurrence
/// of its variable, and later occurrences must agree with that match.
pub fn parallel_reduce_check(m: &Term, n: &Term) -> bool {
    let mut cx = Matcher { counter: 0 };
    cx.pr(m, State::default(), n).is_some()
}

#[derive(Clone, Debug)]
enum Binding {
    Pending(Term),
    Known(Term),
}

#[derive(Clone, Debug, Default)]
struct State {
    terms: BTreeMap<Symbol, Binding>,
    tvars: BTreeMap<Symbol, Transition>,
}

impl State {
    fn tvar(&self, v: &TVar) -> Transition {
        match v {
            TVar::Free(s) => self.tvars.get(s).cloned().unwrap_or_else(|| Transition::single(v.clone())),
            TVar::Bound(_) => Transition::single(v.clone()),
        }
    }

    fn transition(&self, b: &Transition) -> Transition {
        b.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) => self.tvars.get(s).cloned(),
            TVar::Bound(_) => None,
        })
    }

    fn ty(&self, t: &crate::syntax::Type) -> crate::syntax::Type {
        t.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) => self.tvars.get(s).cloned(),
            TVar::Bound(_) => None,
        })
    }
}

struct Matcher {
    counter: u32,
}

impl Matcher {
    /// Names that cannot clash with parsed or generated identifiers.
    fn fresh(&mut self) -> Symbol {
        self.counter += 1;
        sym(&format!("%{}", self.counter))
    }

    fn open_term(&mut self, body: &Term) -> (Symbol, Term) {
        let x = self.fresh();
        let opened = body.open_term(&Term::Var(Var::Free(x.clone())));
        (x, opened)
    }

    fn open_tvar(&mut self, body: &Term) -> (Symbol, Term) {
        let a = self.fresh();
        let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
        (a, opened)
    }

    fn binder_pair(&mut self, mb: &Term, nb: &Term) -> (Term, Term) {
        let x = self.fresh();
        let v = Term::Var(Var::Free(x));
        (mb.open_term(&v), nb.open_term(&v))
    }

    fn pr(&mut self, m: &Term, st: State, n: &Term) -> Option<State> {
        match m {
            Term::Var(Var::Free(x)) => match st.terms.get(x).cloned() {
                Some(Binding::Known(v)) => (v == *n).then_some(st),
                Some(Binding::Pending(src)) => {
                    let mut st = self.pr(&src, st, n)?;
                    st.terms.insert(x.clone(), Binding::Known(n.clone()));
                    Some(st)
                }
                None => (m == n).then_some(st),
            },
            Term::Var(Var::Bound(_)) | Term::Int(_) | Term::Bool(_) => (m == n).then_some(st),
            Term::BinOp(op, l, r) => match n {
                Term::BinOp(op2, l2, r2) if op == op2 => {
                    let st = self.pr(l, st, l2)?;
                    self.pr(r, st, r2)
                }
                _ => None,
            },
            Term::If(c, t, e) => match n {
                Term::If(c2, t2, e2) => {
                    let st = self.pr(c, st, c2)?;
                    let st = self.pr(t, st, t2)?;
                    self.pr(e, st, e2)
                }
                _ => None,
            },
            Term::Fix(_, ty, body) => match n {
                Term::Fix(_, ty2, body2) if st.ty(ty) == *ty2 => {
                    let (mb, nb) = self.binder_pair(body, body2);
                    self.pr(&mb, st, &nb)
                }
                _ => None,
            },
            Term::Lam(_, ty, body) => match n {
                Term::Lam(_, ty2, body2) if st.ty(ty) == *ty2 => {
                    let (mb, nb) = self.binder_pair(body, body2);
                    self.pr(&mb, st, &nb)
                }
                _ => None,
            },
            Term::App(f, a) => {
                if let Term::App(f2, a2) = n {
                    if let Some(st2) = self.pr(f, st.clone(), f2).and_then(|s| self.pr(a, s, a2)) {
                        return Some(st2);
                    }
                }
                if let Term::Lam(_, _, body) = &**f {
                    let (x, opened) = self.open_term(body);
                    let mut st = st;
                    st.terms.insert(x.clone(), Binding::Pending((**a).clone()));
                    let mut st = self.pr(&opened, st, n)?;
                    st.terms.remove(&x);
                    return Some(st);
                }
                None
            }
            Term::Next(v, body) => {
                let mut rest = n;
                for w in st.tvar(v).vars() {
                    match rest {
                        Term::Next(w2, inner) if w2 == w => rest = inner,
                        _ => return None,
                    }
                }
                self.pr(body, st, rest)
            }
            Term::Prev(v, body) => {
                let mut rest = Some(n);
                for w in st.tvar(v).vars().iter().rev() {
                    rest = match rest {
                        Some(Term::Prev(w2, inner)) if w2 == w => Some(inner),
                        _ => None,
                    };
                }
                if let Some(rest) = rest {
                    if let Some(st2) = self.pr(body, st.clone(), rest) {
                        return Some(st2);
                    }
                }
                let inner = cancel_quotes(m)?;
                self.pr(inner, st, n)
            }
            Term::Gen(_, body) => match n {
                Term::Gen(_, body2) => {
                    let a = self.fresh();
                    let t = Transition::single(TVar::Free(a));
                    self.pr(&body.open_tvar(&t), st, &body2.open_tvar(&t))
                }
                _ => None,
            },
            Term::TApp(f, b) => {
                if let Term::TApp(f2, b2) = n {
                    if st.transition(b) == *b2 {
                        if let Some(st2) = self.pr(f, st.clone(), f2) {
                            return Some(st2);
                        }
                    }
                }
                if let Term::Gen(_, body) = &**f {
                    let (a, opened) = self.open_tvar(body);
                    let mut st = st;
                    let image = st.transition(b);
                    st.tvars.insert(a.clone(), image);
                    let mut st = self.pr(&opened, st, n)?;
                    st.tvars.remove(&a);
                    return Some(st);
                }
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Type;

    fn b() -> Type {
        Type::base("b")
    }

    fn id() -> Term {
        Term::lam("x", b(), Term::var("x"))
    }

    #[test]
    fn development_examples() {
        assert_eq!(complete_development(&Term::app(id(), Term::var("y"))), Term::var("y"));
        let m = Term::prev("c", Term::prev("a", Term::next("a", Term::next("c", Term::var("x")))));
        assert_eq!(complete_development(&m), Term::var("x"));
        let m = Term::prev("a", Term::app(Term::var("x"), Term::var("y")));
        assert_eq!(complete_development(&m), m);
    }

    #[test]
    fn development_partial_chain() {
        // ◁a(◁c(▷c(▷d x))): only the inner pair cancels
        let m = Term::prev("a", Term::prev("c", Term::next("c", Term::next("d", Term::var("x")))));
        assert_eq!(complete_development(&m), Term::prev("a", Term::next("d", Term::var("x"))));
    }

    #[test]
    fn parallel_examples() {
        let m = Term::app(id(), Term::app(id(), Term::var("y")));
        assert!(parallel_reduce_check(&m, &m));
        let q = Term::prev("c", Term::prev("a", Term::next("a", Term::next("c", Term::var("x")))));
        assert!(parallel_reduce_check(&q, &Term::var("x")));
        assert!(!parallel_reduce_check(&Term::var("x"), &Term::var("y")));
        assert!(parallel_reduce_check(&m, &Term::var("y")));
        assert!(parallel_reduce_check(&m, &Term::app(id(), Term::var("y"))));
    }

    #[test]
    fn parallel_check_agrees_with_enumeration() {
        let dup =
            Term::lam("f", Type::arrow(b(), b()), Term::app(Term::var("f"), Term::app(Term::var("f"), Term::var("z"))));
        let m = Term::app(dup, Term::app(id(), id()));
        let all = parallel_reducts(&m);
        assert!(all.len() > 2);
        for n in &all {
            assert!(parallel_reduce_check(&m, n), "{n:?}");
        }
        // a non-uniform choice for the duplicated argument is not a parallel step
        let odd = Term::app(Term::app(id(), id()), Term::app(id(), Term::var("z")));
        assert!(!all.contains(&odd));
        assert!(!parallel_reduce_check(&m, &odd));
    }

    #[test]
    fn parallel_instantiation() {
        let g = Term::gen("a", Term::next("a", Term::prev("a", Term::next("a", Term::var("y")))));
        let m = Term::tapp(g, Transition::from_names(&["c", "d"]));
        let nf = Term::next("c", Term::next("d", Term::var("y")));
        assert!(parallel_reduce_check(&m, &nf));
        for n in parallel_reducts(&m) {
            assert!(parallel_reduce_check(&m, &n));
            assert!(parallel_reduce_check(&n, &complete_development(&m)));
        }
    }
}
