use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Symbol, TVar, Transition, Type};

/// Propositions are types with the extra `⊥` leaf.
pub type Proposition = Type;

/// Hypotheses `φ@A`.
pub type LogicContext = BTreeSet<(Proposition, Transition)>;

/// `Γ ⊢^A φ`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub context: LogicContext,
    pub stage: Transition,
    pub prop: Proposition,
}

impl Judgment {
    pub fn new(context: LogicContext, stage: Transition, prop: Proposition) -> Judgment {
        Judgment { context, stage, prop }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Hyp,
    ArrowI,
    ArrowE,
    CodeI,
    CodeE,
    /// Generalizes over the eigenvariable, which is free in the premise.
    ForallI {
        eigen: Symbol,
    },
    ForallE {
        instance: Transition,
    },
    /// Double negation elimination; the stage of `⊥` is free in mode
    /// `AnyStage` and must match in mode `SameStage`.
    BotE,
    /// Double negation elimination with the stage of `⊥` fixed.
    BotEAlt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Judgment, premises: Vec<Derivation>) -> Derivation {
        Derivation { rule, conclusion, premises }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalMode {
    AnyStage,
    SameStage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationErrorKind {
    RuleMismatch,
    SideConditionFailure,
    PremiseShapeError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationError {
    pub kind: DerivationErrorKind,
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub detail: &'static str,
}

impl fmt::Display for DerivationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at node [", self.kind)?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]: {}", self.detail)
    }
}

impl core::error::Error for DerivationError {}

/// Replays `d` and returns its root judgment.
pub fn check_derivation(d: &Derivation, mode: ClassicalMode) -> Result<Judgment, DerivationError> {
    let mut path = Vec::new();
    check(d, mode, &mut path)?;
    Ok(d.conclusion.clone())
}

fn err<T>(kind: DerivationErrorKind, path: &[usize], detail: &'static str) -> Result<T, DerivationError> {
    Err(DerivationError { kind, path: path.to_vec(), detail })
}

fn check(d: &Derivation, mode: ClassicalMode, path: &mut Vec<usize>) -> Result<(), DerivationError> {
    use DerivationErrorKind::*;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check(p, mode, path)?;
        path.pop();
    }
    let arity = match d.rule {
        Rule::Hyp => 0,
        Rule::ArrowE => 2,
        _ => 1,
    };
    if d.premises.len() != arity {
        return err(PremiseShapeError, path, "wrong number of premises");
    }
    let Judgment { context, stage, prop } = &d.conclusion;
    let prem = |i: usize| &d.premises[i].conclusion;
    match &d.rule {
        Rule::Hyp => {
            if !context.contains(&(prop.clone(), stage.clone())) {
                return err(SideConditionFailure, path, "hypothesis is not in the context");
            }
        }
        Rule::ArrowI => {
            let Type::Arrow(phi, psi) = prop else {
                return err(RuleMismatch, path, "conclusion is not an implication");
            };
            let mut extended = context.clone();
            extended.insert(((**phi).clone(), stage.clone()));
            let p = prem(0);
            if p.context != extended || &p.stage != stage || p.prop != **psi {
                return err(RuleMismatch, path, "premise does not discharge the antecedent");
            }
        }
        Rule::ArrowE => {
            let (f, a) = (prem(0), prem(1));
            let Type::Arrow(phi, psi) = &f.prop else {
                return err(PremiseShapeError, path, "major premise is not an implication");
            };
            if &f.context != context || &a.context != context || &f.stage != stage || &a.stage != stage {
                return err(RuleMismatch, path, "premises differ in context or stage");
            }
            if a.prop != **phi || **psi != *prop {
                return err(RuleMismatch, path, "implication does not match");
            }
        }
        Rule::CodeI => {
            let Type::Code(v, body) = prop else {
                return err(RuleMismatch, path, "conclusion is not a modality");
            };
            let p = prem(0);
            if &p.context != context || p.stage != stage.pushed(v.clone()) || p.prop != **body {
                return err(RuleMismatch, path, "premise is not at the extended stage");
            }
        }
        Rule::CodeE => {
            let p = prem(0);
            let Type::Code(v, body) = &p.prop else {
                return err(PremiseShapeError, path, "premise is not a modality");
            };
            if &p.context != context || p.stage.pushed(v.clone()) != *stage || **body != *prop {
                return err(RuleMismatch, path, "conclusion is not at the extended stage");
            }
        }
        Rule::ForallI { eigen } => {
            let p = prem(0);
            let mut fmv = BTreeSet::new();
            for (phi, a) in context {
                phi.collect_fmv(&mut fmv);
                a.collect_fmv(&mut fmv);
            }
            stage.collect_fmv(&mut fmv);
            if fmv.contains(eigen) {
                return err(SideConditionFailure, path, "eigenvariable occurs in the context or stage");
            }
            let Type::Forall(_, body) = prop else {
                return err(RuleMismatch, path, "conclusion is not universal");
            };
            if &p.context != context || &p.stage != stage || p.prop.close_tvar(eigen) != **body {
                return err(RuleMismatch, path, "conclusion does not generalize the premise");
            }
        }
        Rule::ForallE { instance } => {
            let p = prem(0);
            let Type::Forall(_, body) = &p.prop else {
                return err(PremiseShapeError, path, "premise is not universal");
            };
            if instance.vars().iter().any(|v| matches!(v, TVar::Bound(_))) {
                return err(SideConditionFailure, path, "instance has a dangling variable");
            }
            if &p.context != context || &p.stage != stage || body.open_tvar(instance) != *prop {
                return err(RuleMismatch, path, "conclusion is not the instance");
            }
        }
        Rule::BotE | Rule::BotEAlt => {
            let p = prem(0);
            let mut extended = context.clone();
            extended.insert((Type::not(prop.clone()), stage.clone()));
            if p.context != extended || p.prop != Type::Bottom {
                return err(RuleMismatch, path, "premise must derive falsity from the negated conclusion");
            }
            let fixed = d.rule == Rule::BotEAlt || mode == ClassicalMode::SameStage;
            if fixed && &p.stage != stage {
                return err(SideConditionFailure, path, "falsity is derived at a different stage");
            }
        }
    }
    Ok(())
}
