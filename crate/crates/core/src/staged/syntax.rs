use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::syntax::{fresh, sym, BinOp, Hint, Symbol, TVar, Term, Transition, Type, Var};

/// Types of the staged system: `∀` records the stage at which its variable
/// is declared, relative to the stage of the quantified type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StagedType {
    Base(Symbol),
    Int,
    Bool,
    Bottom,
    Arrow(Box<StagedType>, Box<StagedType>),
    Code(TVar, Box<StagedType>),
    /// `∀α@B.τ`; `B` lies outside the binder.
    Forall(Hint, Transition, Box<StagedType>),
}

/// Terms of the staged system: plain terms plus instantiation by a single
/// declared variable, and `Λ` annotated with its declaration stage.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StagedTerm {
    Var(Var),
    Int(BigInt),
    Bool(bool),
    BinOp(BinOp, Box<StagedTerm>, Box<StagedTerm>),
    If(Box<StagedTerm>, Box<StagedTerm>, Box<StagedTerm>),
    Fix(Hint, StagedType, Box<StagedTerm>),
    Lam(Hint, StagedType, Box<StagedTerm>),
    App(Box<StagedTerm>, Box<StagedTerm>),
    Next(TVar, Box<StagedTerm>),
    Prev(TVar, Box<StagedTerm>),
    /// `Λα@B.M`
    Gen(Hint, Transition, Box<StagedTerm>),
    /// `[M A]`
    TApp(Box<StagedTerm>, Transition),
    /// `M[β]`
    SIns(Box<StagedTerm>, TVar),
}

impl StagedType {
    pub fn arrow(a: StagedType, b: StagedType) -> StagedType {
        StagedType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn code(v: TVar, t: StagedType) -> StagedType {
        StagedType::Code(v, Box::new(t))
    }

    pub fn code_at(a: &Transition, t: StagedType) -> StagedType {
        a.0.iter().rev().fold(t, |acc, v| StagedType::code(v.clone(), acc))
    }

    pub fn forall(alpha: &str, decl: Transition, body: StagedType) -> StagedType {
        let a = sym(alpha);
        StagedType::Forall(Hint(a.clone()), decl, Box::new(body.close_tvar(&a)))
    }

    /// Every plain `∀` becomes `∀α@ε`.
    pub fn from_plain(t: &Type) -> StagedType {
        match t {
            Type::Base(b) => StagedType::Base(b.clone()),
            Type::Int => StagedType::Int,
            Type::Bool => StagedType::Bool,
            Type::Bottom => StagedType::Bottom,
            Type::Arrow(a, b) => StagedType::arrow(StagedType::from_plain(a), StagedType::from_plain(b)),
            Type::Code(v, b) => StagedType::code(v.clone(), StagedType::from_plain(b)),
            Type::Forall(h, b) => {
                StagedType::Forall(h.clone(), Transition::epsilon(), Box::new(StagedType::from_plain(b)))
            }
        }
    }

    /// Forgets declaration stages.
    pub fn strip(&self) -> Type {
        match self {
            StagedType::Base(b) => Type::Base(b.clone()),
            StagedType::Int => Type::Int,
            StagedType::Bool => Type::Bool,
            StagedType::Bottom => Type::Bottom,
            StagedType::Arrow(a, b) => Type::arrow(a.strip(), b.strip()),
            StagedType::Code(v, b) => Type::code(v.clone(), b.strip()),
            StagedType::Forall(h, _, b) => Type::Forall(h.clone(), Box::new(b.strip())),
        }
    }

    pub fn map_tvars(&self, depth: u32, f: &mut dyn FnMut(&TVar, u32) -> Option<Transition>) -> StagedType {
        match self {
            StagedType::Base(_) | StagedType::Int | StagedType::Bool | StagedType::Bottom => self.clone(),
            StagedType::Arrow(a, b) => StagedType::arrow(a.map_tvars(depth, f), b.map_tvars(depth, f)),
            StagedType::Code(v, t) => {
                let body = t.map_tvars(depth, f);
                match f(v, depth) {
                    Some(b) => StagedType::code_at(&b, body),
                    None => StagedType::code(v.clone(), body),
                }
            }
            StagedType::Forall(h, decl, t) => {
                StagedType::Forall(h.clone(), decl.map_tvars(depth, f), Box::new(t.map_tvars(depth + 1, f)))
            }
        }
    }

    pub fn open_tvar(&self, b: &Transition) -> StagedType {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Bound(i) if *i == d => Some(b.clone()),
            _ => None,
        })
    }

    pub fn close_tvar(&self, alpha: &Symbol) -> StagedType {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Free(s) if s == alpha => Some(Transition::single(TVar::Bound(d))),
            _ => None,
        })
    }

    pub fn subst_tvar(&self, alpha: &Symbol, b: &Transition) -> StagedType {
        self.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) if s == alpha => Some(b.clone()),
            _ => None,
        })
    }

    pub fn collect_fmv(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            StagedType::Base(_) | StagedType::Int | StagedType::Bool | StagedType::Bottom => {}
            StagedType::Arrow(a, b) => {
                a.collect_fmv(out);
                b.collect_fmv(out);
            }
            StagedType::Code(v, t) => {
                if let TVar::Free(s) = v {
                    out.insert(s.clone());
                }
                t.collect_fmv(out);
            }
            StagedType::Forall(_, decl, t) => {
                decl.collect_fmv(out);
                t.collect_fmv(out);
            }
        }
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_fmv(&mut out);
        out
    }

    pub fn unbind(hint: &Hint, body: &StagedType, avoid: &BTreeSet<Symbol>) -> (Symbol, StagedType) {
        let mut avoid = avoid.clone();
        body.collect_fmv(&mut avoid);
        let a = fresh(hint.as_str(), &avoid);
        let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
        (a, opened)
    }
}

impl StagedTerm {
    pub fn var(x: &str) -> StagedTerm {
        StagedTerm::Var(Var::Free(sym(x)))
    }

    pub fn int(n: i64) -> StagedTerm {
        StagedTerm::Int(BigInt::from(n))
    }

    pub fn app(m: StagedTerm, n: StagedTerm) -> StagedTerm {
        StagedTerm::App(Box::new(m), Box::new(n))
    }

    pub fn binop(op: BinOp, m: StagedTerm, n: StagedTerm) -> StagedTerm {
        StagedTerm::BinOp(op, Box::new(m), Box::new(n))
    }

    pub fn if_(c: StagedTerm, t: StagedTerm, e: StagedTerm) -> StagedTerm {
        StagedTerm::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn next(a: &str, m: StagedTerm) -> StagedTerm {
        StagedTerm::Next(TVar::free(a), Box::new(m))
    }

    pub fn prev(a: &str, m: StagedTerm) -> StagedTerm {
        StagedTerm::Prev(TVar::free(a), Box::new(m))
    }

    pub fn next_at(a: &Transition, m: StagedTerm) -> StagedTerm {
        a.0.iter().rev().fold(m, |acc, v| StagedTerm::Next(v.clone(), Box::new(acc)))
    }

    pub fn prev_at(a: &Transition, m: StagedTerm) -> StagedTerm {
        a.0.iter().fold(m, |acc, v| StagedTerm::Prev(v.clone(), Box::new(acc)))
    }

    pub fn tapp(m: StagedTerm, a: Transition) -> StagedTerm {
        StagedTerm::TApp(Box::new(m), a)
    }

    pub fn sins(m: StagedTerm, b: &str) -> StagedTerm {
        StagedTerm::SIns(Box::new(m), TVar::free(b))
    }

    pub fn lam(x: &str, t: StagedType, body: StagedTerm) -> StagedTerm {
        let s = sym(x);
        StagedTerm::Lam(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    pub fn fix(f: &str, t: StagedType, body: StagedTerm) -> StagedTerm {
        let s = sym(f);
        StagedTerm::Fix(Hint(s.clone()), t, Box::new(body.close_term(&s)))
    }

    pub fn gen(a: &str, decl: Transition, body: StagedTerm) -> StagedTerm {
        let s = sym(a);
        StagedTerm::Gen(Hint(s.clone()), decl, Box::new(body.close_tvar(&s)))
    }

    /// Plain terms embed with every `Λ` declared at `ε` relative to its stage.
    pub fn from_plain(m: &Term) -> StagedTerm {
        let go = StagedTerm::from_plain;
        match m {
            Term::Var(v) => StagedTerm::Var(v.clone()),
            Term::Int(n) => StagedTerm::Int(n.clone()),
            Term::Bool(b) => StagedTerm::Bool(*b),
            Term::BinOp(op, l, r) => StagedTerm::binop(*op, go(l), go(r)),
            Term::If(c, t, e) => StagedTerm::if_(go(c), go(t), go(e)),
            Term::Fix(h, t, b) => StagedTerm::Fix(h.clone(), StagedType::from_plain(t), Box::new(go(b))),
            Term::Lam(h, t, b) => StagedTerm::Lam(h.clone(), StagedType::from_plain(t), Box::new(go(b))),
            Term::App(f, a) => StagedTerm::app(go(f), go(a)),
            Term::Next(v, b) => StagedTerm::Next(v.clone(), Box::new(go(b))),
            Term::Prev(v, b) => StagedTerm::Prev(v.clone(), Box::new(go(b))),
            Term::Gen(h, b) => StagedTerm::Gen(h.clone(), Transition::epsilon(), Box::new(go(b))),
            Term::TApp(f, a) => StagedTerm::tapp(go(f), a.clone()),
        }
    }

    /// Forgets declaration stages; `M[β]` becomes `M β`.
    pub fn strip(&self) -> Term {
        match self {
            StagedTerm::Var(v) => Term::Var(v.clone()),
            StagedTerm::Int(n) => Term::Int(n.clone()),
            StagedTerm::Bool(b) => Term::Bool(*b),
            StagedTerm::BinOp(op, l, r) => Term::binop(*op, l.strip(), r.strip()),
            StagedTerm::If(c, t, e) => Term::if_(c.strip(), t.strip(), e.strip()),
            StagedTerm::Fix(h, t, b) => Term::Fix(h.clone(), t.strip(), Box::new(b.strip())),
            StagedTerm::Lam(h, t, b) => Term::Lam(h.clone(), t.strip(), Box::new(b.strip())),
            StagedTerm::App(f, a) => Term::app(f.strip(), a.strip()),
            StagedTerm::Next(v, b) => Term::Next(v.clone(), Box::new(b.strip())),
            StagedTerm::Prev(v, b) => Term::Prev(v.clone(), Box::new(b.strip())),
            StagedTerm::Gen(h, _, b) => Term::Gen(h.clone(), Box::new(b.strip())),
            StagedTerm::TApp(f, a) => Term::tapp(f.strip(), a.clone()),
            StagedTerm::SIns(f, v) => Term::tapp(f.strip(), Transition::single(v.clone())),
        }
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<StagedTerm>) -> StagedTerm {
        use StagedTerm as S;
        match self {
            S::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            S::Int(_) | S::Bool(_) => self.clone(),
            S::BinOp(op, m, n) => S::binop(*op, m.map_vars(depth, f), n.map_vars(depth, f)),
            S::If(c, t, e) => S::if_(c.map_vars(depth, f), t.map_vars(depth, f), e.map_vars(depth, f)),
            S::Fix(h, t, m) => S::Fix(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            S::Lam(h, t, m) => S::Lam(h.clone(), t.clone(), Box::new(m.map_vars(depth + 1, f))),
            S::App(m, n) => S::app(m.map_vars(depth, f), n.map_vars(depth, f)),
            S::Next(a, m) => S::Next(a.clone(), Box::new(m.map_vars(depth, f))),
            S::Prev(a, m) => S::Prev(a.clone(), Box::new(m.map_vars(depth, f))),
            S::Gen(h, b, m) => S::Gen(h.clone(), b.clone(), Box::new(m.map_vars(depth, f))),
            S::TApp(m, a) => S::tapp(m.map_vars(depth, f), a.clone()),
            S::SIns(m, a) => S::SIns(Box::new(m.map_vars(depth, f)), a.clone()),
        }
    }

    /// Transition substitution. Instantiating `M[β]` with a transition of
    /// length other than one yields the ordinary instantiation `M B`.
    pub fn map_tvars(&self, depth: u32, f: &mut dyn FnMut(&TVar, u32) -> Option<Transition>) -> StagedTerm {
        use StagedTerm as S;
        match self {
            S::Var(_) | S::Int(_) | S::Bool(_) => self.clone(),
            S::BinOp(op, m, n) => S::binop(*op, m.map_tvars(depth, f), n.map_tvars(depth, f)),
            S::If(c, t, e) => S::if_(c.map_tvars(depth, f), t.map_tvars(depth, f), e.map_tvars(depth, f)),
            S::Fix(h, t, m) => S::Fix(h.clone(), t.map_tvars(depth, f), Box::new(m.map_tvars(depth, f))),
            S::Lam(h, t, m) => S::Lam(h.clone(), t.map_tvars(depth, f), Box::new(m.map_tvars(depth, f))),
            S::App(m, n) => S::app(m.map_tvars(depth, f), n.map_tvars(depth, f)),
            S::Next(a, m) => {
                let body = m.map_tvars(depth, f);
                match f(a, depth) {
                    Some(b) => S::next_at(&b, body),
                    None => S::Next(a.clone(), Box::new(body)),
                }
            }
            S::Prev(a, m) => {
                let body = m.map_tvars(depth, f);
                match f(a, depth) {
                    Some(b) => S::prev_at(&b, body),
                    None => S::Prev(a.clone(), Box::new(body)),
                }
            }
            S::Gen(h, b, m) => S::Gen(h.clone(), b.map_tvars(depth, f), Box::new(m.map_tvars(depth + 1, f))),
            S::TApp(m, a) => S::tapp(m.map_tvars(depth, f), a.map_tvars(depth, f)),
            S::SIns(m, a) => {
                let body = m.map_tvars(depth, f);
                match f(a, depth) {
                    Some(b) if b.len() == 1 => S::SIns(Box::new(body), b.0[0].clone()),
                    Some(b) => S::tapp(body, b),
                    None => S::SIns(Box::new(body), a.clone()),
                }
            }
        }
    }

    pub fn open_term(&self, n: &StagedTerm) -> StagedTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> StagedTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(StagedTerm::Var(Var::Bound(d))),
            _ => None,
        })
    }

    pub fn subst_term(&self, x: &Symbol, n: &StagedTerm) -> StagedTerm {
        self.map_vars(0, &mut |v, _| match v {
            Var::Free(s) if s == x => Some(n.clone()),
            _ => None,
        })
    }

    pub fn open_tvar(&self, b: &Transition) -> StagedTerm {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Bound(i) if *i == d => Some(b.clone()),
            _ => None,
        })
    }

    pub fn close_tvar(&self, alpha: &Symbol) -> StagedTerm {
        self.map_tvars(0, &mut |v, d| match v {
            TVar::Free(s) if s == alpha => Some(Transition::single(TVar::Bound(d))),
            _ => None,
        })
    }

    pub fn collect_names(&self, out: &mut BTreeSet<Symbol>) {
        use StagedTerm as S;
        match self {
            S::Var(Var::Free(s)) => {
                out.insert(s.clone());
            }
            S::Var(_) | S::Int(_) | S::Bool(_) => {}
            S::BinOp(_, m, n) | S::App(m, n) => {
                m.collect_names(out);
                n.collect_names(out);
            }
            S::If(c, t, e) => {
                c.collect_names(out);
                t.collect_names(out);
                e.collect_names(out);
            }
            S::Fix(_, t, m) | S::Lam(_, t, m) => {
                t.collect_fmv(out);
                m.collect_names(out);
            }
            S::Next(a, m) | S::Prev(a, m) | S::SIns(m, a) => {
                if let TVar::Free(s) = a {
                    out.insert(s.clone());
                }
                m.collect_names(out);
            }
            S::Gen(_, b, m) => {
                b.collect_fmv(out);
                m.collect_names(out);
            }
            S::TApp(m, a) => {
                a.collect_fmv(out);
                m.collect_names(out);
            }
        }
    }

    /// Free term and transition names.
    pub fn names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub fn unbind_term(hint: &Hint, body: &StagedTerm, avoid: &BTreeSet<Symbol>) -> (Symbol, StagedTerm) {
        let mut avoid = avoid.clone();
        body.collect_names(&mut avoid);
        let x = fresh(hint.as_str(), &avoid);
        let opened = body.open_term(&StagedTerm::Var(Var::Free(x.clone())));
        (x, opened)
    }

    pub fn unbind_tvar(hint: &Hint, body: &StagedTerm, avoid: &BTreeSet<Symbol>) -> (Symbol, StagedTerm) {
        let mut avoid = avoid.clone();
        body.collect_names(&mut avoid);
        let a = fresh(hint.as_str(), &avoid);
        let opened = body.open_tvar(&Transition::single(TVar::Free(a.clone())));
        (a, opened)
    }

    pub fn size(&self) -> usize {
        use StagedTerm as S;
        match self {
            S::Var(_) | S::Int(_) | S::Bool(_) => 1,
            S::BinOp(_, m, n) | S::App(m, n) => 1 + m.size() + n.size(),
            S::If(c, t, e) => 1 + c.size() + t.size() + e.size(),
            S::Fix(_, _, m)
            | S::Lam(_, _, m)
            | S::Next(_, m)
            | S::Prev(_, m)
            | S::Gen(_, _, m)
            | S::TApp(m, _)
            | S::SIns(m, _) => 1 + m.size(),
        }
    }
}

/// `Δ`: each transition variable with its declaration stage.
pub type TransitionEnv = BTreeMap<Symbol, Transition>;

/// `Γ` for the staged system.
pub type StagedContext = BTreeMap<Symbol, (StagedType, Transition)>;
