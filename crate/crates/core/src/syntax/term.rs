use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::name::{fresh, sym, Hint, Symbol};
use super::path::{TVar, Transition};
use super::ty::Type;

/// A term variable occurrence: a free name or a de Bruijn index pointing at
/// an enclosing `λ`/`fix` binder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Free(Symbol),
    Bound(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Int(BigInt),
    Bool(bool),
    BinOp(BinOp, Box<Term>, Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    /// `fix f:τ. M`; the annotation is the type of `f` (an arrow).
    Fix(Hint, Type, Box<Term>),
    Lam(Hint, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Next(TVar, Box<Term>),
    Prev(TVar, Box<Term>),
    Gen(Hint, Box<Term>),
    TApp(Box<Term>, Transition),
}

/// Tree address of a subterm: the child indices taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<u32>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, i: u32) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn under(mut self, i: u32) -> Position {
        self.0.insert(0, i);
        self
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Var::Free(sym(x)))
    }

    pub fn int(n: i64) -> Term {
        Term::Int(BigInt::from(n))
    }

    pub fn app(m: Term, n: Term) -> Term {
        Term::App(Box::new(m), Box::new(n))
    }

    pub fn binop(op: BinOp, m: Term, n: Term) -> Term {
        Term::BinOp(op, Box::new(m), Box::new(n))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn next(a: &str, m: Term) -> Term {
        Term::Next(TVar::free(a), Box::new(m))
    }

    pub fn prev(a: &str, m: Term) -> Term {
        Term::Prev(TVar::free(a), Box::new(m))
    }

    pub fn next_at(a: &Transition, m: Term) -> Term {
        a.0.iter().rev().fold(m, |acc, v| Term::Next(v.clone(), Box::new(acc)))
    }

    /// `◁A M`: the last variable of `A` is outermost.
    pub fn prev_at(a: &Transition, m: Term) -> Term {
        a.0.iter().fold(m, |acc, v| Term::Prev(v.clone(), Box::new(acc)))
    }

    pub fn tapp(m: Term, a: Transition) -> Term {
        Term::TApp(Box::new(m), a)
    }

    /// `λx:τ. body` with the free variable `x` of `body` abstracted.
    pub fn lam(x: &str, t: Type, body: Term) -> Term {
        let s = sym(x);
        Term::Lam(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    pub fn fix(f: &str, t: Type, body: Term) -> Term {
        let s = sym(f);
        Term::Fix(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    /// `Λα. body` with the free transition variable `α` of `body` abstracted.
    pub fn gen(a: &str, body: Term) -> Term {
        let s = sym(a);
        Term::Gen(Hint(s.clone()), Box::new(body.close_tvar(&s)))
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            Term::Int(_) | Term::Bool(_) => self.clone(),
            Term::BinOp(op, m, n) => Term::binop(*op, m.map_vars(depth, f), n.map_vars(depth, f)),
            Term::If(c, t, e) => Term::if_(c.map_vars(depth, f), t.map_vars(depth, f), e.map_vars(depth, f)),
            Term::Fix(h, t, m) => Term::Fix(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            Term::Lam(h, t, m) => Term::Lam(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            Term::App(m, n) => Term::app(m.map_vars(depth, f), n.map_vars(depth, f)),
            Term::Next(a, m) => Term::Next(a.clone(), Box::new(m.map_vars(depth, f))),
            Term::Prev(a, m) => Term::Prev(a.clone(), Box::new(m.map_vars(depth, f))),
            Term::Gen(h, m) => Term::Gen(h.clone(), Box::new(m.map_vars(depth, f))),
            Term::TApp(m, a) => Term::tapp(m.map_vars(depth, f), a.clone()),
        }
    }

    pub fn map_tvars(&self, depth: u32, f: &mut dyn FnMut(&TVar, u32) -> Option<Transition>) -> Term {
        match self {
            Term::Var(_) | Term::Int(_) | Term::Bool(_) => self.clone(),
            Term::BinOp(op, m, n) => Term::binop(*op, m.map_tvars(depth, f), n.map_tvars(depth, f)),
            Term::If(c, t, e) => Term::if_(c.map_tvars(depth, f), t.map_tvars(depth, f), e.map_tvars(depth, f)),
            Term::Fix(h, t, m) => Term::Fix(h.clone(), t.map_tvars(depth, f), Box::new(m.map_tvars(depth, f))),
            Term::Lam(h, t, m) => Term::Lam(h.clone(), t.map_tvars(depth, f), Box::new(m.map_tvars(depth, f))),
            Term::App(m, n) => Term::app(m.map_tvars(depth, f), n.map_tvars(depth, f)),
            Term::Next(a, m) => {
                let body = m.map_tvars(depth, f);
                match f(a, depth) {
                    Some(b) => Term::next_at(&b, body),
                    None => Term::Next(a.clone(), Box::new(body)),
                }
            }
            Term::Prev(a, m) => {
                let body = m.map_tvars(depth, f);
                match f(a, depth) {
                    Some(b) => Term::prev_at(&b, body),
                    None => Term::Prev(a.clone(), Box::new(body)),
                }
            }
            Term::Gen(h, m) => Term::Gen(h.clone(), Box::new(m.map_tvars(depth + 1, f))),
            Term::TApp(m, a) => Term::tapp(m.map_tvars(depth, f), a.map_tvars(depth, f)),
        }
    }

    /// Instantiates the outermost bound term variable with the locally
    /// closed term `n`.
    pub fn open_term(&self, n: &Term) -> Term {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> Term {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(Term::Var(Var::Bound(d))),
            _ => None,
        })
    }

    /// `M[x := N]`; capture cannot occur since bound variables are indices.
    pub fn subst_term(&self, x: &Symbol, n: &Term) -> Term {
        self.map_vars(0, &mut |v, _| match v {
            Var::Free(s) if s == x => Some(n.clone()),
            _ => None,
        })
    }

    pub fn open_tvar(&self, b: &Transition) -> Term {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Bound(i) if *i == d => Some(b.clone()),
            _ => None,
        })
    }

    pub fn close_tvar(&self, alpha: &Symbol) -> Term {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Free(s) if s == alpha => Some(Transition::single(TVar::Bound(d))),
            _ => None,
        })
    }

    /// `M[α := B]`.
    pub fn subst_tvar(&self, alpha: &Symbol, b: &Transition) -> Term {
        self.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) if s == alpha => Some(b.clone()),
            _ => None,
        })
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(Var::Free(s)) => {
                out.insert(s.clone());
            }
            Term::Var(Var::Bound(_)) | Term::Int(_) | Term::Bool(_) => {}
            Term::BinOp(_, m, n) | Term::App(m, n) => {
                m.collect_free_vars(out);
                n.collect_free_vars(out);
            }
            Term::If(c, t, e) => {
                c.collect_free_vars(out);
                t.collect_free_vars(out);
                e.collect_free_vars(out);
            }
            Term::Fix(_, _, m)
            | Term::Lam(_, _, m)
            | Term::Next(_, m)
            | Term::Prev(_, m)
            | Term::Gen(_, m)
            | Term::TApp(m, _) => m.collect_free_vars(out),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn collect_fmv(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(_) | Term::Int(_) | Term::Bool(_) => {}
            Term::BinOp(_, m, n) | Term::App(m, n) => {
                m.collect_fmv(out);
                n.collect_fmv(out);
            }
            Term::If(c, t, e) => {
                c.collect_fmv(out);
                t.collect_fmv(out);
                e.collect_fmv(out);
            }
            Term::Fix(_, t, m) | Term::Lam(_, t, m) => {
                t.collect_fmv(out);
                m.collect_fmv(out);
            }
            Term::Next(a, m) | Term::Prev(a, m) => {
                if let TVar::Free(s) = a {
                    out.insert(s.clone());
                }
                m.collect_fmv(out);
            }
            Term::Gen(_, m) => m.collect_fmv(out),
            Term::TApp(m, a) => {
                m.collect_fmv(out);
                a.collect_fmv(out);
            }
        }
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_fmv(&mut out);
        out
    }

    /// Free term and transition names together; used as an avoid set.
    pub fn names(&self) -> BTreeSet<Symbol> {
        let mut out = self.free_vars();
        self.collect_fmv(&mut out);
        out
    }

    /// Opens a `λ`/`fix` body with a fresh name.
    pub fn unbind_term(hint: &Hint, body: &Term, avoid: &BTreeSet<Symbol>) -> (Symbol, Term) {
        let mut avoid = avoid.clone();
        body.collect_free_vars(&mut avoid);
        let x = fresh(hint.as_str(), &avoid);
        let opened = body.open_term(&Term::Var(Var::Free(x.clone())));
        (x, opened)
    }

    /// Opens a `Λ` body with a fresh transition name.
    pub fn unbind_tvar(hint: &Hint, body: &Term, avoid: &BTreeSet<Symbol>) -> (Symbol, Term) {
        let mut avoid = avoid.clone();
        body.collect_fmv(&mut avoid);
        let a = fresh(hint.as_str(), &avoid);
        let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
        (a, opened)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) | Term::Bool(_) => 1,
            Term::BinOp(_, m, n) | Term::App(m, n) => 1 + m.size() + n.size(),
            Term::If(c, t, e) => 1 + c.size() + t.size() + e.size(),
            Term::Fix(_, _, m)
            | Term::Lam(_, _, m)
            | Term::Next(_, m)
            | Term::Prev(_, m)
            | Term::Gen(_, m)
            | Term::TApp(m, _) => 1 + m.size(),
        }
    }

    /// True for terms built only from variables, `λ`, application, `▷`, `◁`,
    /// `Λ` and instantiation.
    pub fn is_pure(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Int(_) | Term::Bool(_) | Term::BinOp(..) | Term::If(..) | Term::Fix(..) => false,
            Term::App(m, n) => m.is_pure() && n.is_pure(),
            Term::Lam(_, _, m) | Term::Next(_, m) | Term::Prev(_, m) | Term::Gen(_, m) | Term::TApp(m, _) => {
                m.is_pure()
            }
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = match (cur, i) {
                (Term::BinOp(_, m, _), 0) | (Term::App(m, _), 0) => m,
                (Term::BinOp(_, _, n), 1) | (Term::App(_, n), 1) => n,
                (Term::If(c, _, _), 0) => c,
                (Term::If(_, t, _), 1) => t,
                (Term::If(_, _, e), 2) => e,
                (Term::Fix(_, _, m), 0)
                | (Term::Lam(_, _, m), 0)
                | (Term::Next(_, m), 0)
                | (Term::Prev(_, m), 0)
                | (Term::Gen(_, m), 0)
                | (Term::TApp(m, _), 0) => m,
                _ => return None,
            };
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Type {
        Type::base("b")
    }

    #[test]
    fn subst_term_avoids_capture() {
        // (λy:b. x)[x := y] keeps y free
        let m = Term::lam("y", b(), Term::var("x"));
        let r = m.subst_term(&sym("x"), &Term::var("y"));
        match &r {
            Term::Lam(_, _, body) => assert_eq!(**body, Term::var("y")),
            _ => panic!(),
        }
        assert_eq!(r.free_vars(), [sym("y")].into_iter().collect());
        assert_eq!(Term::var("x").subst_term(&sym("x"), &Term::int(1)), Term::int(1));
    }

    #[test]
    fn subst_is_stage_blind() {
        let m = Term::next("a", Term::var("x"));
        let n = Term::prev("a", Term::var("z"));
        assert_eq!(m.subst_term(&sym("x"), &n), Term::next("a", Term::prev("a", Term::var("z"))));
    }

    #[test]
    fn transition_subst_reverses_prev() {
        let m = Term::prev("b", Term::var("x"));
        let r = m.subst_tvar(&sym("b"), &Transition::from_names(&["a", "c"]));
        assert_eq!(r, Term::prev("c", Term::prev("a", Term::var("x"))));
        let n = Term::next("a", Term::var("x"));
        assert_eq!(n.subst_tvar(&sym("a"), &Transition::epsilon()), Term::var("x"));
    }

    #[test]
    fn fmv_clauses() {
        assert_eq!(Term::next("a", Term::var("x")).fmv(), [sym("a")].into_iter().collect());
        assert!(Term::gen("a", Term::next("a", Term::var("x"))).fmv().is_empty());
    }

    #[test]
    fn alpha_equiv_examples() {
        let m1 = Term::gen("a", Term::next("a", Term::var("x")));
        let m2 = Term::gen("b", Term::next("b", Term::var("x")));
        assert_eq!(m1, m2);
        assert_eq!(Term::lam("x", b(), Term::var("x")), Term::lam("y", b(), Term::var("y")));
        let m3 = Term::gen("a", Term::next("b", Term::var("x")));
        assert_ne!(m3, m1);
    }

    #[test]
    fn positions_display() {
        assert_eq!(alloc::format!("{}", Position::root()), "root");
        assert_eq!(alloc::format!("{}", Position(alloc::vec![0, 1])), "0.1");
    }
}
