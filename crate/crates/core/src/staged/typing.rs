use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::syntax::{StagedContext, StagedTerm, StagedType, TransitionEnv};
use crate::syntax::{fresh, BinOp, Position, Symbol, TVar, Transition, Var};

/// What a well-formedness judgment is about.
#[derive(Clone, Copy, Debug)]
pub enum WfSubject<'a> {
    /// `Δ ⊢s A`
    Transition(&'a Transition),
    /// `⊢s Δ`
    Env,
    /// `Δ ⊢s^A τ`
    Type(&'a Transition, &'a StagedType),
    /// `Δ ⊢s Γ`
    Context(&'a StagedContext),
}

pub fn wf(delta: &TransitionEnv, subject: WfSubject<'_>) -> bool {
    match subject {
        WfSubject::Transition(a) => wf_transition(delta, a),
        WfSubject::Env => wf_env(delta),
        WfSubject::Type(a, t) => wf_type(delta, a, t),
        WfSubject::Context(g) => wf_context(delta, g),
    }
}

/// Each variable of `A` is declared at the prefix preceding it.
pub fn wf_transition(delta: &TransitionEnv, a: &Transition) -> bool {
    a.vars().iter().enumerate().all(|(i, v)| match v {
        TVar::Free(s) => delta.get(s).is_some_and(|decl| decl.vars() == &a.vars()[..i]),
        TVar::Bound(_) => false,
    })
}

pub fn wf_env(delta: &TransitionEnv) -> bool {
    delta.values().all(|a| wf_transition(delta, a))
}

pub fn wf_type(delta: &TransitionEnv, a: &Transition, t: &StagedType) -> bool {
    match t {
        StagedType::Int | StagedType::Bool => wf_transition(delta, a),
        StagedType::Base(_) | StagedType::Bottom => false,
        StagedType::Arrow(l, r) => wf_type(delta, a, l) && wf_type(delta, a, r),
        StagedType::Code(v, body) => !matches!(v, TVar::Bound(_)) && wf_type(delta, &a.pushed(v.clone()), body),
        StagedType::Forall(h, b, body) => {
            let mut avoid = env_names(delta);
            a.collect_fmv(&mut avoid);
            b.collect_fmv(&mut avoid);
            let (alpha, body) = StagedType::unbind(h, body, &avoid);
            let mut inner = delta.clone();
            inner.insert(alpha, a.concat(b));
            wf_type(&inner, a, &body)
        }
    }
}

pub fn wf_context(delta: &TransitionEnv, ctx: &StagedContext) -> bool {
    wf_env(delta) && ctx.values().all(|(t, a)| wf_type(delta, a, t))
}

fn env_names(delta: &TransitionEnv) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for (k, v) in delta {
        out.insert(k.clone());
        v.collect_fmv(&mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WfReason {
    Context,
    Stage(Transition),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StagedTypeErrorKind {
    #[error("variable `{name}` is not in scope")]
    UnboundVariable { name: Symbol },
    #[error("variable `{name}` is used at a stage other than its declaration stage")]
    VarStageMismatch { name: Symbol, declared: Transition, used: Transition },
    #[error("applying a term that is not a function")]
    NotAFunction { found: StagedType },
    #[error("argument type does not match the parameter type")]
    ArgumentMismatch { expected: StagedType, found: StagedType },
    #[error("unquoting a term that is not code at the right transition variable")]
    NotCode { var: TVar, found: StagedType },
    #[error("unquote is used at a stage that does not end with its transition variable")]
    PrevStageMismatch { var: TVar, stage: Transition },
    #[error("instantiating a term that is not polymorphic")]
    NotForall { found: StagedType },
    #[error("condition is not a boolean")]
    ConditionNotBool { found: StagedType },
    #[error("branches have different types")]
    BranchMismatch { then_type: StagedType, else_type: StagedType },
    #[error("arithmetic operand is not an integer")]
    ArithNotInt { found: StagedType },
    #[error("fix annotation is not a function type")]
    FixAnnotationNotArrow { found: StagedType },
    #[error("fix body does not have the annotated type")]
    FixBodyMismatch { expected: StagedType, found: StagedType },
    #[error("not well formed under the transition environment: {reason:?}")]
    WfFailure { reason: WfReason },
    #[error("sequence instantiation needs a type of the form forall a @ []. <a> T")]
    Ins1ShapeMismatch { found: StagedType },
    #[error("{var:?} is not declared at the stage required by the quantifier")]
    Ins2UndeclaredStage { var: TVar, required: Transition },
    #[error("dangling bound variable")]
    IllFormed,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} (at {position})")]
pub struct StagedTypeError {
    pub kind: StagedTypeErrorKind,
    pub position: Position,
}

/// Synthesizes the type of `m` under `Γ; Δ` at stage `stage`.
pub fn staged_typecheck(
    ctx: &StagedContext,
    delta: &TransitionEnv,
    stage: &Transition,
    m: &StagedTerm,
) -> Result<StagedType, StagedTypeError> {
    let mut avoid = env_names(delta);
    for (x, (t, a)) in ctx {
        avoid.insert(x.clone());
        t.collect_fmv(&mut avoid);
        a.collect_fmv(&mut avoid);
    }
    stage.collect_fmv(&mut avoid);
    avoid.extend(m.names());
    Checker { avoid }
        .check(ctx, delta, stage, m)
        .map_err(|(kind, path)| StagedTypeError { kind, position: Position(path.into_iter().rev().collect()) })
}

type Failure = (StagedTypeErrorKind, Vec<u32>);

fn at<T>(r: Result<T, Failure>, child: u32) -> Result<T, Failure> {
    r.map_err(|(k, mut p)| {
        p.push(child);
        (k, p)
    })
}

fn fail<T>(kind: StagedTypeErrorKind) -> Result<T, Failure> {
    Err((kind, Vec::new()))
}

struct Checker {
    avoid: BTreeSet<Symbol>,
}

impl Checker {
    fn fresh(&mut self, hint: &str) -> Symbol {
        let s = fresh(hint, &self.avoid);
        self.avoid.insert(s.clone());
        s
    }

    fn leaf(&self, ctx: &StagedContext, delta: &TransitionEnv, stage: &Transition) -> Result<(), Failure> {
        if !wf_context(delta, ctx) {
            return fail(StagedTypeErrorKind::WfFailure { reason: WfReason::Context });
        }
        if !wf_transition(delta, stage) {
            return fail(StagedTypeErrorKind::WfFailure { reason: WfReason::Stage(stage.clone()) });
        }
        Ok(())
    }

    fn check(
        &mut self,
        ctx: &StagedContext,
        delta: &TransitionEnv,
        stage: &Transition,
        m: &StagedTerm,
    ) -> Result<StagedType, Failure> {
        use StagedTypeErrorKind as K;
        match m {
            StagedTerm::Var(Var::Free(x)) => match ctx.get(x) {
                None => fail(K::UnboundVariable { name: x.clone() }),
                Some((t, a)) if a == stage => {
                    self.leaf(ctx, delta, stage)?;
                    Ok(t.clone())
                }
                Some((_, a)) => fail(K::VarStageMismatch { name: x.clone(), declared: a.clone(), used: stage.clone() }),
            },
            StagedTerm::Var(Var::Bound(_)) => fail(K::IllFormed),
            StagedTerm::Int(_) => {
                self.leaf(ctx, delta, stage)?;
                Ok(StagedType::Int)
            }
            StagedTerm::Bool(_) => {
                self.leaf(ctx, delta, stage)?;
                Ok(StagedType::Bool)
            }
            StagedTerm::BinOp(op, l, r) => {
                let tl = at(self.check(ctx, delta, stage, l), 0)?;
                if tl != StagedType::Int {
                    return at(fail(K::ArithNotInt { found: tl }), 0);
                }
                let tr = at(self.check(ctx, delta, stage, r), 1)?;
                if tr != StagedType::Int {
                    return at(fail(K::ArithNotInt { found: tr }), 1);
                }
                Ok(if *op == BinOp::Eq { StagedType::Bool } else { StagedType::Int })
            }
            StagedTerm::If(c, t, e) => {
                let tc = at(self.check(ctx, delta, stage, c), 0)?;
                if tc != StagedType::Bool {
                    return at(fail(K::ConditionNotBool { found: tc }), 0);
                }
                let tt = at(self.check(ctx, delta, stage, t), 1)?;
                let te = at(self.check(ctx, delta, stage, e), 2)?;
                if tt != te {
                    return fail(K::BranchMismatch { then_type: tt, else_type: te });
                }
                Ok(tt)
            }
            StagedTerm::Fix(h, ann, body) => {
                if !matches!(ann, StagedType::Arrow(..)) {
                    return fail(K::FixAnnotationNotArrow { found: ann.clone() });
                }
                let f = self.fresh(h.as_str());
                let body = body.open_term(&StagedTerm::Var(Var::Free(f.clone())));
                let mut inner = ctx.clone();
                inner.insert(f, (ann.clone(), stage.clone()));
                let tb = at(self.check(&inner, delta, stage, &body), 0)?;
                if &tb != ann {
                    return at(fail(K::FixBodyMismatch { expected: ann.clone(), found: tb }), 0);
                }
                Ok(ann.clone())
            }
            StagedTerm::Lam(h, ann, body) => {
                let x = self.fresh(h.as_str());
                let body = body.open_term(&StagedTerm::Var(Var::Free(x.clone())));
                let mut inner = ctx.clone();
                inner.insert(x, (ann.clone(), stage.clone()));
                let tb = at(self.check(&inner, delta, stage, &body), 0)?;
                Ok(StagedType::arrow(ann.clone(), tb))
            }
            StagedTerm::App(f, a) => {
                let tf = at(self.check(ctx, delta, stage, f), 0)?;
                let (dom, cod) = match tf {
                    StagedType::Arrow(d, c) => (*d, *c),
                    other => return at(fail(K::NotAFunction { found: other }), 0),
                };
                let ta = at(self.check(ctx, delta, stage, a), 1)?;
                if ta != dom {
                    return at(fail(K::ArgumentMismatch { expected: dom, found: ta }), 1);
                }
                Ok(cod)
            }
            StagedTerm::Next(v, body) => {
                if matches!(v, TVar::Bound(_)) {
                    return fail(K::IllFormed);
                }
                let tb = at(self.check(ctx, delta, &stage.pushed(v.clone()), body), 0)?;
                Ok(StagedType::Code(v.clone(), Box::new(tb)))
            }
            StagedTerm::Prev(v, body) => {
                let outer = match stage.split_last() {
                    Some((outer, last)) if last == v => outer,
                    _ => return fail(K::PrevStageMismatch { var: v.clone(), stage: stage.clone() }),
                };
                match at(self.check(ctx, delta, &outer, body), 0)? {
                    StagedType::Code(w, t) if &w == v => Ok(*t),
                    other => at(fail(K::NotCode { var: v.clone(), found: other }), 0),
                }
            }
            StagedTerm::Gen(h, b, body) => {
                let alpha = self.fresh(h.as_str());
                let body = body.open_tvar(&Transition::single(TVar::Free(alpha.clone())));
                let mut inner = delta.clone();
                inner.insert(alpha.clone(), stage.concat(b));
                let tb = at(self.check(ctx, &inner, stage, &body), 0)?;
                Ok(StagedType::Forall(h.clone(), b.clone(), Box::new(tb.close_tvar(&alpha))))
            }
            StagedTerm::TApp(f, b) => match at(self.check(ctx, delta, stage, f), 0)? {
                StagedType::Forall(_, decl, body)
                    if decl.is_empty() && matches!(&*body, StagedType::Code(TVar::Bound(0), _)) =>
                {
                    let target = stage.concat(b);
                    if !wf_transition(delta, &target) {
                        return fail(K::WfFailure { reason: WfReason::Stage(target) });
                    }
                    Ok(body.open_tvar(b))
                }
                found @ StagedType::Forall(..) => at(fail(K::Ins1ShapeMismatch { found }), 0),
                other => at(fail(K::NotForall { found: other }), 0),
            },
            StagedTerm::SIns(f, beta) => match at(self.check(ctx, delta, stage, f), 0)? {
                StagedType::Forall(_, decl, body) => {
                    let required = stage.concat(&decl);
                    let declared = match beta {
                        TVar::Free(s) => delta.get(s),
                        TVar::Bound(_) => None,
                    };
                    if declared != Some(&required) {
                        return fail(K::Ins2UndeclaredStage { var: beta.clone(), required });
                    }
                    Ok(body.open_tvar(&Transition::single(beta.clone())))
                }
                other => at(fail(K::NotForall { found: other }), 0),
            },
        }
    }
}
