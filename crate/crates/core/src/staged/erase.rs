use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use num_bigint::BigInt;

use super::syntax::StagedTerm;
use crate::syntax::{fresh, BinOp, Hint, Symbol, Var};

/// Terms with transition annotations and types removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErasedTerm {
    Var(Var),
    Int(BigInt),
    Bool(bool),
    BinOp(BinOp, Box<ErasedTerm>, Box<ErasedTerm>),
    If(Box<ErasedTerm>, Box<ErasedTerm>, Box<ErasedTerm>),
    Fix(Hint, Box<ErasedTerm>),
    Lam(Hint, Box<ErasedTerm>),
    App(Box<ErasedTerm>, Box<ErasedTerm>),
    Next(Box<ErasedTerm>),
    Prev(Box<ErasedTerm>),
    Gen(Box<ErasedTerm>),
    /// `M ▷ []`
    UnitApp(Box<ErasedTerm>),
    /// `M @ n`
    NatApp(Box<ErasedTerm>, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErasedResult {
    Value(ErasedTerm),
    Err,
    FuelExhausted,
}

impl ErasedResult {
    pub fn value(self) -> Option<ErasedTerm> {
        match self {
            ErasedResult::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl ErasedTerm {
    pub fn next_n(n: usize, m: ErasedTerm) -> ErasedTerm {
        (0..n).fold(m, |acc, _| ErasedTerm::Next(Box::new(acc)))
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<ErasedTerm>) -> ErasedTerm {
        use ErasedTerm as E;
        let bx = Box::new;
        match self {
            E::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            E::Int(_) | E::Bool(_) => self.clone(),
            E::BinOp(op, m, n) => E::BinOp(*op, bx(m.map_vars(depth, f)), bx(n.map_vars(depth, f))),
            E::If(c, t, e) => E::If(bx(c.map_vars(depth, f)), bx(t.map_vars(depth, f)), bx(e.map_vars(depth, f))),
            E::Fix(h, m) => E::Fix(h.clone(), bx(m.map_vars(depth + 1, f))),
            E::Lam(h, m) => E::Lam(h.clone(), bx(m.map_vars(depth + 1, f))),
            E::App(m, n) => E::App(bx(m.map_vars(depth, f)), bx(n.map_vars(depth, f))),
            E::Next(m) => E::Next(bx(m.map_vars(depth, f))),
            E::Prev(m) => E::Prev(bx(m.map_vars(depth, f))),
            E::Gen(m) => E::Gen(bx(m.map_vars(depth, f))),
            E::UnitApp(m) => E::UnitApp(bx(m.map_vars(depth, f))),
            E::NatApp(m, n) => E::NatApp(bx(m.map_vars(depth, f)), *n),
        }
    }

    pub fn open_term(&self, n: &ErasedTerm) -> ErasedTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> ErasedTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(ErasedTerm::Var(Var::Bound(d))),
            _ => None,
        })
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Symbol>) {
        self.map_vars(0, &mut |v, _| {
            if let Var::Free(s) = v {
                out.insert(s.clone());
            }
            None
        });
    }

    fn unbind(hint: &Hint, body: &ErasedTerm) -> (Symbol, ErasedTerm) {
        let mut avoid = BTreeSet::new();
        body.collect_free_vars(&mut avoid);
        let x = fresh(hint.as_str(), &avoid);
        let opened = body.open_term(&ErasedTerm::Var(Var::Free(x.clone())));
        (x, opened)
    }

    /// Number of leading `▷` nodes.
    pub fn next_depth(&self) -> usize {
        match self {
            ErasedTerm::Next(m) => 1 + m.next_depth(),
            _ => 0,
        }
    }
}

/// The erasure translation `♭`.
pub fn erase(m: &StagedTerm) -> ErasedTerm {
    use ErasedTerm as E;
    let bx = |m: &StagedTerm| Box::new(erase(m));
    match m {
        StagedTerm::Var(v) => E::Var(v.clone()),
        StagedTerm::Int(n) => E::Int(n.clone()),
        StagedTerm::Bool(b) => E::Bool(*b),
        StagedTerm::BinOp(op, l, r) => E::BinOp(*op, bx(l), bx(r)),
        StagedTerm::If(c, t, e) => E::If(bx(c), bx(t), bx(e)),
        StagedTerm::Fix(h, _, b) => E::Fix(h.clone(), bx(b)),
        StagedTerm::Lam(h, _, b) => E::Lam(h.clone(), bx(b)),
        StagedTerm::App(f, a) => E::App(bx(f), bx(a)),
        StagedTerm::Next(_, b) => E::Next(bx(b)),
        StagedTerm::Prev(_, b) => E::Prev(bx(b)),
        StagedTerm::Gen(_, _, b) => E::Gen(bx(b)),
        StagedTerm::SIns(f, _) => E::UnitApp(bx(f)),
        StagedTerm::TApp(f, a) => E::NatApp(bx(f), a.len()),
    }
}

/// Evaluates an erased term at numeric stage `n`, charging fuel exactly as
/// the evaluator for annotated terms does.
pub fn erased_eval(n: usize, m: &ErasedTerm, fuel: u64) -> ErasedResult {
    let mut ev = Evaluator { fuel };
    match ev.eval(n, m.clone()) {
        Ok(v) => ErasedResult::Value(v),
        Err(Halt::Error) => ErasedResult::Err,
        Err(Halt::Fuel) => ErasedResult::FuelExhausted,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Halt {
    Error,
    Fuel,
}

struct Evaluator {
    fuel: u64,
}

impl Evaluator {
    fn tick(&mut self) -> Result<(), Halt> {
        if self.fuel == 0 {
            return Err(Halt::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(&mut self, n: usize, mut m: ErasedTerm) -> Result<ErasedTerm, Halt> {
        use ErasedTerm as E;
        loop {
            self.tick()?;
            if n > 0 {
                return self.eval_later(n, m);
            }
            match m {
                E::Var(_) | E::Prev(_) => return Err(Halt::Error),
                E::Int(_) | E::Bool(_) | E::Lam(..) => return Ok(m),
                E::Fix(_, ref body) => {
                    m = body.open_term(&m);
                }
                E::App(f, a) => {
                    let E::Lam(_, body) = self.eval(0, *f)? else {
                        return Err(Halt::Error);
                    };
                    let v = self.eval(0, *a)?;
                    m = body.open_term(&v);
                }
                E::BinOp(op, l, r) => {
                    let E::Int(x) = self.eval(0, *l)? else {
                        return Err(Halt::Error);
                    };
                    let E::Int(y) = self.eval(0, *r)? else {
                        return Err(Halt::Error);
                    };
                    return Ok(match op {
                        BinOp::Add => E::Int(x + y),
                        BinOp::Sub => E::Int(x - y),
                        BinOp::Mul => E::Int(x * y),
                        BinOp::Eq => E::Bool(x == y),
                    });
                }
                E::If(c, t, e) => {
                    m = match self.eval(0, *c)? {
                        E::Bool(true) => *t,
                        E::Bool(false) => *e,
                        _ => return Err(Halt::Error),
                    };
                }
                E::Next(body) => return Ok(E::Next(Box::new(self.eval(1, *body)?))),
                E::Gen(body) => return Ok(E::Gen(Box::new(self.eval(0, *body)?))),
                E::UnitApp(f) => {
                    let E::Gen(body) = self.eval(0, *f)? else {
                        return Err(Halt::Error);
                    };
                    m = *body;
                }
                E::NatApp(f, k) => {
                    let E::Gen(body) = self.eval(0, *f)? else {
                        return Err(Halt::Error);
                    };
                    let E::Next(inner) = *body else {
                        return Err(Halt::Error);
                    };
                    m = E::next_n(k, *inner);
                }
            }
        }
    }

    fn eval_later(&mut self, n: usize, m: ErasedTerm) -> Result<ErasedTerm, Halt> {
        use ErasedTerm as E;
        let bx = Box::new;
        match m {
            E::Var(_) | E::Int(_) | E::Bool(_) => Ok(m),
            E::Lam(h, body) => {
                let (x, opened) = E::unbind(&h, &body);
                let v = self.eval(n, opened)?.close_term(&x);
                Ok(E::Lam(h, bx(v)))
            }
            E::Fix(h, body) => {
                let (x, opened) = E::unbind(&h, &body);
                let v = self.eval(n, opened)?.close_term(&x);
                Ok(E::Fix(h, bx(v)))
            }
            E::App(f, a) => {
                let f = self.eval(n, *f)?;
                let a = self.eval(n, *a)?;
                Ok(E::App(bx(f), bx(a)))
            }
            E::BinOp(op, l, r) => {
                let l = self.eval(n, *l)?;
                let r = self.eval(n, *r)?;
                Ok(E::BinOp(op, bx(l), bx(r)))
            }
            E::If(c, t, e) => {
                let c = self.eval(n, *c)?;
                let t = self.eval(n, *t)?;
                let e = self.eval(n, *e)?;
                Ok(E::If(bx(c), bx(t), bx(e)))
            }
            E::Next(body) => Ok(E::Next(bx(self.eval(n + 1, *body)?))),
            E::Prev(body) => {
                let r = self.eval(n - 1, *body)?;
                if n == 1 {
                    match r {
                        E::Next(inner) => Ok(*inner),
                        _ => Err(Halt::Error),
                    }
                } else {
                    Ok(E::Prev(bx(r)))
                }
            }
            E::Gen(body) => Ok(E::Gen(bx(self.eval(n, *body)?))),
            E::UnitApp(f) => Ok(E::UnitApp(bx(self.eval(n, *f)?))),
            E::NatApp(f, k) => Ok(E::NatApp(bx(self.eval(n, *f)?), k)),
        }
    }
}
