use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{embed_base, EmbedError};
use crate::syntax::{fresh, sym, Hint, Symbol, TVar, Term, Transition, Type, TypingContext, Var};

/// Types of the classifier calculus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiType {
    Base(Symbol),
    Arrow(Box<LiType>, Box<LiType>),
    /// `⟨τ⟩^α`
    CodeAt(Box<LiType>, Symbol),
    /// `⟨τ⟩`
    CodeClosed(Box<LiType>),
}

/// Terms carrying the annotations a typing derivation would supply.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiTerm {
    Var(Var),
    Int(BigInt),
    Lam(Hint, Option<LiType>, Box<LiTerm>),
    App(Box<LiTerm>, Box<LiTerm>),
    Bracket(Box<LiTerm>, Option<Symbol>),
    Escape(Box<LiTerm>, Option<Symbol>),
    Run(Box<LiTerm>),
    Open(Box<LiTerm>, Option<Symbol>),
    Close(Box<LiTerm>, Option<Symbol>),
    /// Cross-stage persistence `%M`; has no image.
    Csp(Box<LiTerm>),
}

/// Variables with their types and classifier stages.
pub type LiContext = BTreeMap<Symbol, (LiType, Transition)>;

impl LiType {
    pub fn arrow(a: LiType, b: LiType) -> LiType {
        LiType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn code_at(a: LiType, alpha: &str) -> LiType {
        LiType::CodeAt(Box::new(a), sym(alpha))
    }

    pub fn code_closed(a: LiType) -> LiType {
        LiType::CodeClosed(Box::new(a))
    }

    pub fn collect_classifiers(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            LiType::Base(_) => {}
            LiType::Arrow(a, b) => {
                a.collect_classifiers(out);
                b.collect_classifiers(out);
            }
            LiType::CodeAt(a, c) => {
                out.insert(c.clone());
                a.collect_classifiers(out);
            }
            LiType::CodeClosed(a) => a.collect_classifiers(out),
        }
    }
}

impl LiTerm {
    pub fn var(x: &str) -> LiTerm {
        LiTerm::Var(Var::Free(sym(x)))
    }

    pub fn lam(x: &str, t: LiType, body: LiTerm) -> LiTerm {
        let s = sym(x);
        LiTerm::Lam(Hint(s.clone()), Some(t), Box::new(body.close_term(&s)))
    }

    pub fn app(m: LiTerm, n: LiTerm) -> LiTerm {
        LiTerm::App(Box::new(m), Box::new(n))
    }

    pub fn bracket(m: LiTerm, c: &str) -> LiTerm {
        LiTerm::Bracket(Box::new(m), Some(sym(c)))
    }

    pub fn escape(m: LiTerm, c: &str) -> LiTerm {
        LiTerm::Escape(Box::new(m), Some(sym(c)))
    }

    pub fn run(m: LiTerm) -> LiTerm {
        LiTerm::Run(Box::new(m))
    }

    pub fn open(m: LiTerm, c: &str) -> LiTerm {
        LiTerm::Open(Box::new(m), Some(sym(c)))
    }

    pub fn close(m: LiTerm, c: &str) -> LiTerm {
        LiTerm::Close(Box::new(m), Some(sym(c)))
    }

    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(&Var, u32) -> Option<LiTerm>) -> LiTerm {
        use LiTerm as L;
        let bx = Box::new;
        match self {
            L::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            L::Int(_) => self.clone(),
            L::Lam(h, t, m) => L::Lam(h.clone(), t.clone(), bx(m.map_vars(depth + 1, f))),
            L::App(m, n) => L::App(bx(m.map_vars(depth, f)), bx(n.map_vars(depth, f))),
            L::Bracket(m, c) => L::Bracket(bx(m.map_vars(depth, f)), c.clone()),
            L::Escape(m, c) => L::Escape(bx(m.map_vars(depth, f)), c.clone()),
            L::Run(m) => L::Run(bx(m.map_vars(depth, f))),
            L::Open(m, c) => L::Open(bx(m.map_vars(depth, f)), c.clone()),
            L::Close(m, c) => L::Close(bx(m.map_vars(depth, f)), c.clone()),
            L::Csp(m) => L::Csp(bx(m.map_vars(depth, f))),
        }
    }

    pub fn open_term(&self, n: &LiTerm) -> LiTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Bound(i) if *i == d => Some(n.clone()),
            _ => None,
        })
    }

    pub fn close_term(&self, x: &Symbol) -> LiTerm {
        self.map_vars(0, &mut |v, d| match v {
            Var::Free(s) if s == x => Some(LiTerm::Var(Var::Bound(d))),
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
}

fn ann(c: &Option<Symbol>) -> Option<&Symbol> {
    c.as_ref()
}

/// `Γ ⊢^A M : τ` in the classifier calculus, without `%`.
pub fn li_typecheck(ctx: &LiContext, stage: &Transition, m: &LiTerm) -> Option<LiType> {
    match m {
        LiTerm::Var(Var::Free(x)) => match ctx.get(x) {
            Some((t, a)) if a == stage => Some(t.clone()),
            _ => None,
        },
        LiTerm::Var(Var::Bound(_)) | LiTerm::Csp(_) => None,
        LiTerm::Int(_) => Some(LiType::Base(sym("int"))),
        LiTerm::Lam(h, t, body) => {
            let t = t.as_ref()?;
            let mut avoid: BTreeSet<Symbol> = ctx.keys().cloned().collect();
            avoid.extend(body.free_vars());
            let x = fresh(h.as_str(), &avoid);
            let mut inner = ctx.clone();
            inner.insert(x.clone(), (t.clone(), stage.clone()));
            let tb = li_typecheck(&inner, stage, &body.open_term(&LiTerm::Var(Var::Free(x))))?;
            Some(LiType::arrow(t.clone(), tb))
        }
        LiTerm::App(f, a) => match li_typecheck(ctx, stage, f)? {
            LiType::Arrow(d, c) if li_typecheck(ctx, stage, a)? == *d => Some(*c),
            _ => None,
        },
        LiTerm::Bracket(body, c) => {
            let c = ann(c)?;
            let t = li_typecheck(ctx, &stage.pushed(TVar::Free(c.clone())), body)?;
            Some(LiType::CodeAt(Box::new(t), c.clone()))
        }
        LiTerm::Escape(body, c) => {
            let c = ann(c)?;
            let (outer, last) = stage.split_last()?;
            if *last != TVar::Free(c.clone()) {
                return None;
            }
            match li_typecheck(ctx, &outer, body)? {
                LiType::CodeAt(t, d) if &d == c => Some(*t),
                _ => None,
            }
        }
        LiTerm::Run(body) => match li_typecheck(ctx, stage, body)? {
            LiType::CodeClosed(t) => Some(*t),
            _ => None,
        },
        LiTerm::Open(body, c) => {
            let c = ann(c)?;
            match li_typecheck(ctx, stage, body)? {
                LiType::CodeClosed(t) => Some(LiType::CodeAt(t, c.clone())),
                _ => None,
            }
        }
        LiTerm::Close(body, c) => {
            let c = ann(c)?;
            let mut fv = BTreeSet::new();
            for (t, a) in ctx.values() {
                t.collect_classifiers(&mut fv);
                a.collect_fmv(&mut fv);
            }
            stage.collect_fmv(&mut fv);
            match li_typecheck(ctx, stage, body)? {
                LiType::CodeAt(t, d) if &d == c => {
                    t.collect_classifiers(&mut fv);
                    if fv.contains(c) {
                        None
                    } else {
                        Some(LiType::CodeClosed(t))
                    }
                }
                _ => None,
            }
        }
    }
}

/// `⟨τ⟩` becomes `∀α.⟨α⟩τ` with `α` not free in `τ`.
pub fn embed_li_type(t: &LiType) -> Type {
    match t {
        LiType::Base(b) => embed_base(b),
        LiType::Arrow(a, b) => Type::arrow(embed_li_type(a), embed_li_type(b)),
        LiType::CodeAt(a, c) => Type::code(TVar::Free(c.clone()), embed_li_type(a)),
        LiType::CodeClosed(a) => {
            let inner = embed_li_type(a);
            let alpha = fresh("a", &inner.fmv());
            Type::forall(&alpha, Type::code(TVar::Free(alpha.clone()), inner))
        }
    }
}

pub fn embed_li_context(ctx: &LiContext) -> TypingContext {
    ctx.iter().map(|(x, (t, a))| (x.clone(), (embed_li_type(t), a.clone()))).collect()
}

pub fn embed_lambda_i(m: &LiTerm) -> Result<Term, EmbedError> {
    let need = |c: &Option<Symbol>| c.clone().ok_or(EmbedError::MissingAnnotation);
    match m {
        LiTerm::Var(v) => Ok(Term::Var(v.clone())),
        LiTerm::Int(n) => Ok(Term::Int(n.clone())),
        LiTerm::Lam(h, t, body) => {
            let t = t.as_ref().ok_or(EmbedError::MissingAnnotation)?;
            Ok(Term::Lam(h.clone(), embed_li_type(t), Box::new(embed_lambda_i(body)?)))
        }
        LiTerm::App(f, a) => Ok(Term::app(embed_lambda_i(f)?, embed_lambda_i(a)?)),
        LiTerm::Bracket(body, c) => Ok(Term::Next(TVar::Free(need(c)?), Box::new(embed_lambda_i(body)?))),
        LiTerm::Escape(body, c) => Ok(Term::Prev(TVar::Free(need(c)?), Box::new(embed_lambda_i(body)?))),
        LiTerm::Run(body) => Ok(Term::tapp(embed_lambda_i(body)?, Transition::epsilon())),
        LiTerm::Open(body, c) => Ok(Term::tapp(embed_lambda_i(body)?, Transition::single(TVar::Free(need(c)?)))),
        LiTerm::Close(body, c) => {
            let c = need(c)?;
            Ok(Term::gen(&c, embed_lambda_i(body)?))
        }
        LiTerm::Csp(_) => Err(EmbedError::CspPresent),
    }
}
