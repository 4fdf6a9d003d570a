//! Big-step staged evaluation with explicit errors and a step budget.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use num_bigint::BigInt;

use crate::staged::StagedTerm;
use crate::syntax::{BinOp, Hint, TVar, Term, Transition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Value(Term),
    Err,
    FuelExhausted,
}

impl EvalResult {
    pub fn value(self) -> Option<Term> {
        match self {
            EvalResult::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// Membership in the value class `V^A`.
pub fn is_value(stage: &Transition, m: &Term) -> bool {
    if stage.is_empty() {
        match m {
            Term::Int(_) | Term::Bool(_) | Term::Lam(..) => true,
            Term::Next(v, body) => is_value(&Transition::single(v.clone()), body),
            Term::Gen(h, body) => {
                let (_, opened) = Term::unbind_tvar(h, body, &BTreeSet::new());
                is_value(stage, &opened)
            }
            _ => false,
        }
    } else {
        match m {
            Term::Var(_) | Term::Int(_) | Term::Bool(_) => true,
            Term::Lam(_, _, body) | Term::Fix(_, _, body) => is_value(stage, body),
            Term::App(f, a) | Term::BinOp(_, f, a) => is_value(stage, f) && is_value(stage, a),
            Term::If(c, t, e) => is_value(stage, c) && is_value(stage, t) && is_value(stage, e),
            Term::Next(v, body) => is_value(&stage.pushed(v.clone()), body),
            Term::Gen(h, body) => {
                let (_, opened) = Term::unbind_tvar(h, body, &stage.fmv());
                is_value(stage, &opened)
            }
            Term::TApp(f, _) => is_value(stage, f),
            Term::Prev(v, body) => match stage.split_last() {
                Some((outer, last)) => last == v && !outer.is_empty() && is_value(&outer, body),
                None => false,
            },
        }
    }
}

/// Evaluates `m` at `stage`. Each rule application consumes one unit of
/// fuel.
pub fn eval(stage: &Transition, m: &Term, fuel: u64) -> EvalResult {
    match eval_staged(stage, &StagedTerm::from_plain(m), fuel) {
        StagedResult::Value(v) => EvalResult::Value(v.strip()),
        StagedResult::Err => EvalResult::Err,
        StagedResult::FuelExhausted => EvalResult::FuelExhausted,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StagedResult {
    Value(StagedTerm),
    Err,
    FuelExhausted,
}

impl StagedResult {
    pub fn value(self) -> Option<StagedTerm> {
        match self {
            StagedResult::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// Evaluation of staged terms; `M[β]` behaves as instantiation by `β`.
pub fn eval_staged(stage: &Transition, m: &StagedTerm, fuel: u64) -> StagedResult {
    let mut ev = Evaluator { fuel };
    match ev.eval(stage, m.clone()) {
        Ok(v) => StagedResult::Value(v),
        Err(Halt::Error) => StagedResult::Err,
        Err(Halt::Fuel) => StagedResult::FuelExhausted,
    }
}

/// `run M` is instantiation with the empty transition.
pub fn desugar_run(m: &Term) -> Term {
    Term::tapp(m.clone(), Transition::epsilon())
}

/// Cross-stage persistence of closed code as sugar: `Λβ.◁α(M @ αβ)`.
pub fn desugar_csp(m: &Term, alpha: &TVar, beta: &str) -> Term {
    let body = Term::Prev(
        alpha.clone(),
        Box::new(Term::tapp(m.clone(), Transition(alloc::vec![alpha.clone(), TVar::Bound(0)]))),
    );
    Term::Gen(Hint::new(beta), Box::new(body))
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

    fn eval(&mut self, stage: &Transition, mut m: StagedTerm) -> Result<StagedTerm, Halt> {
        loop {
            self.tick()?;
            if !stage.is_empty() {
                return self.eval_later(stage, m);
            }
            match m {
                StagedTerm::Var(_) | StagedTerm::Prev(..) => return Err(Halt::Error),
                StagedTerm::Int(_) | StagedTerm::Bool(_) | StagedTerm::Lam(..) => return Ok(m),
                StagedTerm::Fix(_, _, ref body) => {
                    m = body.open_term(&m);
                }
                StagedTerm::App(f, a) => {
                    let StagedTerm::Lam(_, _, body) = self.eval(stage, *f)? else {
                        return Err(Halt::Error);
                    };
                    let v = self.eval(stage, *a)?;
                    m = body.open_term(&v);
                }
                StagedTerm::BinOp(op, l, r) => {
                    let StagedTerm::Int(x) = self.eval(stage, *l)? else {
                        return Err(Halt::Error);
                    };
                    let StagedTerm::Int(y) = self.eval(stage, *r)? else {
                        return Err(Halt::Error);
                    };
                    return Ok(arith(op, &x, &y));
                }
                StagedTerm::If(c, t, e) => {
                    m = match self.eval(stage, *c)? {
                        StagedTerm::Bool(true) => *t,
                        StagedTerm::Bool(false) => *e,
                        _ => return Err(Halt::Error),
                    };
                }
                StagedTerm::Next(v, body) => {
                    let inner = self.eval(&Transition::single(v.clone()), *body)?;
                    return Ok(StagedTerm::Next(v, Box::new(inner)));
                }
                StagedTerm::Gen(h, decl, body) => return self.eval_gen(stage, h, decl, &body),
                StagedTerm::TApp(f, b) => {
                    let StagedTerm::Gen(_, _, body) = self.eval(stage, *f)? else {
                        return Err(Halt::Error);
                    };
                    m = body.open_tvar(&b);
                }
                StagedTerm::SIns(f, b) => {
                    let StagedTerm::Gen(_, _, body) = self.eval(stage, *f)? else {
                        return Err(Halt::Error);
                    };
                    m = body.open_tvar(&Transition::single(b));
                }
            }
        }
    }

    fn eval_gen(
        &mut self,
        stage: &Transition,
        h: Hint,
        decl: Transition,
        body: &StagedTerm,
    ) -> Result<StagedTerm, Halt> {
        let (a, opened) = StagedTerm::unbind_tvar(&h, body, &stage.fmv());
        let v = self.eval(stage, opened)?;
        Ok(StagedTerm::Gen(h, decl, Box::new(v.close_tvar(&a))))
    }

    /// Rules at a non-empty stage: structural, except that a Prev at a
    /// length-one stage runs its body at the empty stage.
    fn eval_later(&mut self, stage: &Transition, m: StagedTerm) -> Result<StagedTerm, Halt> {
        match m {
            StagedTerm::Var(_) | StagedTerm::Int(_) | StagedTerm::Bool(_) => Ok(m),
            StagedTerm::Lam(h, t, body) => {
                let (x, opened) = StagedTerm::unbind_term(&h, &body, &BTreeSet::new());
                let v = self.eval(stage, opened)?.close_term(&x);
                Ok(StagedTerm::Lam(h, t, Box::new(v)))
            }
            StagedTerm::Fix(h, t, body) => {
                let (x, opened) = StagedTerm::unbind_term(&h, &body, &BTreeSet::new());
                let v = self.eval(stage, opened)?.close_term(&x);
                Ok(StagedTerm::Fix(h, t, Box::new(v)))
            }
            StagedTerm::App(f, a) => {
                let f = self.eval(stage, *f)?;
                let a = self.eval(stage, *a)?;
                Ok(StagedTerm::app(f, a))
            }
            StagedTerm::BinOp(op, l, r) => {
                let l = self.eval(stage, *l)?;
                let r = self.eval(stage, *r)?;
                Ok(StagedTerm::binop(op, l, r))
            }
            StagedTerm::If(c, t, e) => {
                let c = self.eval(stage, *c)?;
                let t = self.eval(stage, *t)?;
                let e = self.eval(stage, *e)?;
                Ok(StagedTerm::if_(c, t, e))
            }
            StagedTerm::Next(v, body) => {
                let inner = self.eval(&stage.pushed(v.clone()), *body)?;
                Ok(StagedTerm::Next(v, Box::new(inner)))
            }
            StagedTerm::Prev(v, body) => {
                let Some((outer, last)) = stage.split_last() else {
                    return Err(Halt::Error);
                };
                if *last != v {
                    return Err(Halt::Error);
                }
                let r = self.eval(&outer, *body)?;
                if outer.is_empty() {
                    match r {
                        StagedTerm::Next(w, inner) if w == v => Ok(*inner),
                        _ => Err(Halt::Error),
                    }
                } else {
                    Ok(StagedTerm::Prev(v, Box::new(r)))
                }
            }
            StagedTerm::Gen(h, decl, body) => self.eval_gen(stage, h, decl, &body),
            StagedTerm::TApp(f, b) => {
                let f = self.eval(stage, *f)?;
                Ok(StagedTerm::tapp(f, b))
            }
            StagedTerm::SIns(f, b) => {
                let f = self.eval(stage, *f)?;
                Ok(StagedTerm::SIns(Box::new(f), b))
            }
        }
    }
}

fn arith(op: BinOp, x: &BigInt, y: &BigInt) -> StagedTerm {
    match op {
        BinOp::Add => StagedTerm::Int(x + y),
        BinOp::Sub => StagedTerm::Int(x - y),
        BinOp::Mul => StagedTerm::Int(x * y),
        BinOp::Eq => StagedTerm::Bool(x == y),
    }
}
