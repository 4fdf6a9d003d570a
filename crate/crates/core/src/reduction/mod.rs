//! Small-step reduction with annotation paths, parallel reduction and
//! complete development, T-normal forms and the time-ordered strategy.

mod normal;
mod parallel;
mod projection;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::syntax::{Path, Position, TVar, Term};

pub use normal::{is_t_neutral, is_t_normal, is_t_normal_direct};
pub use parallel::{complete_development, parallel_reduce_check, parallel_reducts};
pub use projection::{natural_projection, Bare};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RedexKind {
    /// `(λx.M) N → M[x := N]`
    Beta,
    /// `(Λα.M) A → M[α := A]`
    Ins,
    /// `◁α(▷α M) → M`
    Quote,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedStep {
    pub path: Path,
    pub position: Position,
    pub kind: RedexKind,
    pub result: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("reduction did not reach a normal form within the step budget")]
pub struct FuelExhausted;

/// All one-step reducts of `m`, in leftmost-outermost order.
pub fn redexes(m: &Term) -> Vec<AnnotatedStep> {
    let mut out = Vec::new();
    collect(m, false, &mut out);
    out
}

/// The leftmost-outermost step, or `None` for a normal form.
pub fn step(m: &Term) -> Option<AnnotatedStep> {
    let mut out = Vec::new();
    collect(m, true, &mut out);
    out.pop()
}

pub fn normalize(m: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    normalize_trace(m, fuel).map(|(n, _)| n)
}

/// Normalizes with the default strategy, returning the steps taken.
pub fn normalize_trace(m: &Term, fuel: u64) -> Result<(Term, Vec<AnnotatedStep>), FuelExhausted> {
    let mut cur = m.clone();
    let mut trace = Vec::new();
    loop {
        match step(&cur) {
            None => return Ok((cur, trace)),
            Some(s) => {
                if trace.len() as u64 >= fuel {
                    return Err(FuelExhausted);
                }
                cur = s.result.clone();
                trace.push(s);
            }
        }
    }
}

fn root_redex(m: &Term) -> Option<(RedexKind, Path, Term)> {
    match m {
        Term::App(f, n) => match &**f {
            Term::Lam(_, _, body) => Some((RedexKind::Beta, Path::epsilon(), body.open_term(n))),
            _ => None,
        },
        Term::TApp(f, b) => match &**f {
            Term::Gen(_, body) => Some((RedexKind::Ins, Path::epsilon(), body.open_tvar(b))),
            _ => None,
        },
        Term::Prev(a, inner) => match &**inner {
            Term::Next(a2, body) if a == a2 => Some((RedexKind::Quote, Path::inv_var(a.clone()), (**body).clone())),
            _ => None,
        },
        _ => None,
    }
}

fn collect(m: &Term, first: bool, out: &mut Vec<AnnotatedStep>) {
    if let Some((kind, path, result)) = root_redex(m) {
        out.push(AnnotatedStep { path, position: Position::root(), kind, result });
        if first {
            return;
        }
    }
    let sub = |child: &Term,
               i: u32,
               out: &mut Vec<AnnotatedStep>,
               wrap: &dyn Fn(Term) -> Term,
               pre: &dyn Fn(Path) -> Path| {
        let mut inner = Vec::new();
        collect(child, first, &mut inner);
        for s in inner {
            out.push(AnnotatedStep {
                path: pre(s.path),
                position: s.position.under(i),
                kind: s.kind,
                result: wrap(s.result),
            });
        }
    };
    let same = |p: Path| p;
    match m {
        Term::Var(_) | Term::Int(_) | Term::Bool(_) => {}
        Term::BinOp(op, l, r) => {
            sub(l, 0, out, &|x| Term::binop(*op, x, (**r).clone()), &same);
            if first && !out.is_empty() {
                return;
            }
            sub(r, 1, out, &|x| Term::binop(*op, (**l).clone(), x), &same);
        }
        Term::If(c, t, e) => {
            sub(c, 0, out, &|x| Term::if_(x, (**t).clone(), (**e).clone()), &same);
            if first && !out.is_empty() {
                return;
            }
            sub(t, 1, out, &|x| Term::if_((**c).clone(), x, (**e).clone()), &same);
            if first && !out.is_empty() {
                return;
            }
            sub(e, 2, out, &|x| Term::if_((**c).clone(), (**t).clone(), x), &same);
        }
        Term::Fix(h, ty, body) | Term::Lam(h, ty, body) => {
            let (x, opened) = Term::unbind_term(h, body, &BTreeSet::new());
            let is_fix = matches!(m, Term::Fix(..));
            let wrap = |r: Term| {
                let b = Box::new(r.close_term(&x));
                if is_fix {
                    Term::Fix(h.clone(), ty.clone(), b)
                } else {
                    Term::Lam(h.clone(), ty.clone(), b)
                }
            };
            sub(&opened, 0, out, &wrap, &same);
        }
        Term::App(f, a) => {
            sub(f, 0, out, &|x| Term::app(x, (**a).clone()), &same);
            if first && !out.is_empty() {
                return;
            }
            sub(a, 1, out, &|x| Term::app((**f).clone(), x), &same);
        }
        Term::Next(v, body) => {
            let pre = |p: Path| Path::var(v.clone()).concat(&p);
            sub(body, 0, out, &|x| Term::Next(v.clone(), Box::new(x)), &pre);
        }
        Term::Prev(v, body) => {
            let pre = |p: Path| Path::inv_var(v.clone()).concat(&p);
            sub(body, 0, out, &|x| Term::Prev(v.clone(), Box::new(x)), &pre);
        }
        Term::Gen(h, body) => {
            let (a, opened) = Term::unbind_tvar(h, body, &BTreeSet::new());
            let wrap = |r: Term| Term::Gen(h.clone(), Box::new(r.close_tvar(&a)));
            let pre = |p: Path| p.erase_var(&a);
            sub(&opened, 0, out, &wrap, &pre);
        }
        Term::TApp(f, b) => {
            sub(f, 0, out, &|x| Term::tapp(x, b.clone()), &same);
        }
    }
}

/// The total order on paths used by [`time_ordered_sequence`]: more inverse
/// letters first, then shorter, then lexicographic. It extends `≤`.
pub fn time_order(t: &Path, u: &Path) -> Ordering {
    u.inverse_count().cmp(&t.inverse_count()).then(t.len().cmp(&u.len())).then_with(|| t.letters().cmp(u.letters()))
}

/// Reduces to normal form always contracting a redex whose path is minimal
/// under [`time_order`]. The resulting path sequence is non-decreasing for
/// typable terms.
pub fn time_ordered_sequence(m: &Term, fuel: u64) -> Result<Vec<AnnotatedStep>, FuelExhausted> {
    let mut cur = m.clone();
    let mut trace = Vec::new();
    loop {
        let steps = redexes(&cur);
        let Some(best) = steps.into_iter().min_by(|a, b| time_order(&a.path, &b.path)) else {
            return Ok(trace);
        };
        if trace.len() as u64 >= fuel {
            return Err(FuelExhausted);
        }
        cur = best.result.clone();
        trace.push(best);
    }
}

/// Splits `◁a1 … ◁ak R` (R not a Prev) into the variables and `R`.
fn prev_chain(m: &Term) -> (Vec<&TVar>, &Term) {
    let mut vars = Vec::new();
    let mut cur = m;
    while let Term::Prev(v, inner) = cur {
        vars.push(v);
        cur = inner;
    }
    (vars, cur)
}

/// If `m = ◁A(▷A M')` returns `M'`. The matching `A` is unique: it has the
/// length of the whole Prev chain at the root.
pub(crate) fn cancel_quotes(m: &Term) -> Option<&Term> {
    let (prevs, mut rest) = prev_chain(m);
    if prevs.is_empty() {
        return None;
    }
    for v in prevs.iter().rev() {
        match rest {
            Term::Next(w, inner) if w == *v => rest = inner,
            _ => return None,
        }
    }
    Some(rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Transition, Type};

    fn b() -> Type {
        Type::base("b")
    }

    fn id() -> Term {
        Term::lam("x", b(), Term::var("x"))
    }

    fn a() -> TVar {
        TVar::free("a")
    }

    #[test]
    fn redexes_under_next() {
        let m = Term::next("a", Term::app(id(), Term::var("y")));
        let r = redexes(&m);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].path, Path::var(a()));
        assert_eq!(r[0].result, Term::next("a", Term::var("y")));
        assert_eq!(r[0].position, Position(alloc::vec![0]));
    }

    #[test]
    fn quote_path() {
        let r = redexes(&Term::prev("a", Term::next("a", Term::var("z"))));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].path, Path::inv_var(a()));
        assert_eq!(r[0].result, Term::var("z"));
    }

    #[test]
    fn gen_erases_bound_letters() {
        let m = Term::gen("a", Term::next("a", Term::prev("a", Term::next("a", Term::var("z")))));
        let r = redexes(&m);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].path, Path::epsilon());
        assert_eq!(r[0].result, Term::gen("a", Term::next("a", Term::var("z"))));
    }

    #[test]
    fn step_is_leftmost_outermost() {
        assert_eq!(step(&Term::app(id(), Term::var("y"))).unwrap().result, Term::var("y"));
        assert!(step(&Term::var("y")).is_none());
        let m = Term::app(Term::app(id(), Term::var("y")), Term::app(id(), Term::var("z")));
        assert_eq!(step(&m).unwrap().result, Term::app(Term::var("y"), Term::app(id(), Term::var("z"))));
    }

    #[test]
    fn normalize_examples() {
        let bb = Transition::from_names(&["c", "c"]);
        let m = Term::tapp(Term::gen("a", Term::next("a", Term::var("y"))), bb);
        assert_eq!(normalize(&m, 100).unwrap(), Term::next("c", Term::next("c", Term::var("y"))));
        let m = Term::prev("c", Term::prev("a", Term::next("a", Term::next("c", Term::var("x")))));
        assert_eq!(normalize(&m, 100).unwrap(), Term::var("x"));
        assert_eq!(normalize(&Term::var("x"), 0).unwrap(), Term::var("x"));
    }

    #[test]
    fn subst_reversal_still_cancels() {
        // (◁β x)[β := a c] wrapped by the matching quotes normalizes to x
        let m = Term::prev("b", Term::var("x")).subst_tvar(&crate::sym("b"), &Transition::from_names(&["a", "c"]));
        assert_eq!(m, Term::prev("c", Term::prev("a", Term::var("x"))));
        let wrapped = Term::prev("c", Term::prev("a", Term::next("a", Term::next("c", Term::var("x")))));
        assert_eq!(normalize(&wrapped, 10).unwrap(), Term::var("x"));
    }

    #[test]
    fn time_order_examples() {
        let inv = Path::inv_var(a());
        assert_eq!(time_order(&inv, &Path::epsilon()), Ordering::Less);
        let m = Term::prev("a", Term::next("a", Term::app(id(), Term::var("y"))));
        let seq = time_ordered_sequence(&m, 10).unwrap();
        let paths: Vec<Path> = seq.iter().map(|s| s.path.clone()).collect();
        assert_eq!(paths, alloc::vec![inv, Path::epsilon()]);
        assert_eq!(seq.last().unwrap().result, Term::var("y"));
        assert!(time_ordered_sequence(&Term::var("y"), 10).unwrap().is_empty());
        let m = Term::app(id(), Term::app(Term::lam("y", b(), Term::var("y")), Term::var("z")));
        let seq = time_ordered_sequence(&m, 10).unwrap();
        assert!(seq.iter().all(|s| s.path == Path::epsilon()) && seq.len() == 2);
    }

    #[test]
    fn quote_cancellation_matching() {
        let m = Term::prev("c", Term::prev("a", Term::next("a", Term::next("c", Term::var("x")))));
        assert_eq!(cancel_quotes(&m), Some(&Term::var("x")));
        let m = Term::prev("a", Term::prev("c", Term::next("c", Term::next("d", Term::var("x")))));
        assert_eq!(cancel_quotes(&m), None);
    }
}
