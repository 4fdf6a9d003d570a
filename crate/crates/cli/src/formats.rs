//! Structured text formats: `.prf` derivations and `.kmodel` models.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use stagecraft_core::logic::{Derivation, Judgment, KripkeModel, LogicContext, ModelMode, Proposition, Rule};
use stagecraft_core::syntax::{sym, TVar, Transition};

use crate::error::CliError;
use crate::syntax::{convert, parse_stage, parse_type, stage_to_string, type_to_string};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleRecord {
    Hyp,
    ArrowI,
    ArrowE,
    CodeI,
    CodeE,
    ForallI { eigen: String },
    ForallE { instance: String },
    BotE,
    BotEAlt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypRecord {
    pub prop: String,
    #[serde(default)]
    pub at: String,
}

/// One node of a derivation; stages are variable lists like `"[a b]"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationRecord {
    pub rule: RuleRecord,
    #[serde(default)]
    pub context: Vec<HypRecord>,
    #[serde(default)]
    pub stage: String,
    pub prop: String,
    #[serde(default)]
    pub premises: Vec<DerivationRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub label: String,
    /// `(from, to)` pairs; a state without a row has no successor.
    pub rows: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationRecord {
    pub atom: String,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub states: Vec<String>,
    pub labels: Vec<String>,
    pub transitions: Vec<TransitionRecord>,
    #[serde(default)]
    pub valuation: Vec<ValuationRecord>,
}

fn format_err(what: &str, src: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Format(format!("in {what} `{src}`: {e}"))
}

pub fn parse_proposition(src: &str) -> Result<Proposition, CliError> {
    let t = parse_type(src)?;
    Ok(convert::to_type(&t, Default::default())?)
}

pub fn print_proposition(p: &Proposition) -> String {
    type_to_string(&convert::from_type(p))
}

fn stage_field(src: &str) -> Result<Transition, CliError> {
    let vs = parse_stage(src).map_err(|e| format_err("stage", src, e))?;
    Ok(Transition(vs.iter().map(|v| TVar::free(v)).collect()))
}

fn prop_field(src: &str) -> Result<Proposition, CliError> {
    let t = parse_type(src).map_err(|e| format_err("proposition", src, e))?;
    convert::to_type(&t, Default::default()).map_err(|e| format_err("proposition", src, e))
}

pub fn print_stage(a: &Transition) -> String {
    let names: Vec<String> = a
        .vars()
        .iter()
        .map(|v| match v {
            TVar::Free(s) => s.to_string(),
            TVar::Bound(i) => format!("?{i}"),
        })
        .collect();
    stage_to_string(&names)
}

pub fn derivation_from_record(r: &DerivationRecord) -> Result<Derivation, CliError> {
    let rule = match &r.rule {
        RuleRecord::Hyp => Rule::Hyp,
        RuleRecord::ArrowI => Rule::ArrowI,
        RuleRecord::ArrowE => Rule::ArrowE,
        RuleRecord::CodeI => Rule::CodeI,
        RuleRecord::CodeE => Rule::CodeE,
        RuleRecord::ForallI { eigen } => Rule::ForallI { eigen: sym(eigen) },
        RuleRecord::ForallE { instance } => Rule::ForallE { instance: stage_field(instance)? },
        RuleRecord::BotE => Rule::BotE,
        RuleRecord::BotEAlt => Rule::BotEAlt,
    };
    let mut context = LogicContext::new();
    for h in &r.context {
        context.insert((prop_field(&h.prop)?, stage_field(&h.at)?));
    }
    let conclusion = Judgment::new(context, stage_field(&r.stage)?, prop_field(&r.prop)?);
    let premises = r.premises.iter().map(derivation_from_record).collect::<Result<_, _>>()?;
    Ok(Derivation::new(rule, conclusion, premises))
}

pub fn derivation_to_record(d: &Derivation) -> DerivationRecord {
    let rule = match &d.rule {
        Rule::Hyp => RuleRecord::Hyp,
        Rule::ArrowI => RuleRecord::ArrowI,
        Rule::ArrowE => RuleRecord::ArrowE,
        Rule::CodeI => RuleRecord::CodeI,
        Rule::CodeE => RuleRecord::CodeE,
        Rule::ForallI { eigen } => RuleRecord::ForallI { eigen: eigen.to_string() },
        Rule::ForallE { instance } => RuleRecord::ForallE { instance: print_stage(instance) },
        Rule::BotE => RuleRecord::BotE,
        Rule::BotEAlt => RuleRecord::BotEAlt,
    };
    DerivationRecord {
        rule,
        context: d
            .conclusion
            .context
            .iter()
            .map(|(p, a)| HypRecord { prop: print_proposition(p), at: print_stage(a) })
            .collect(),
        stage: print_stage(&d.conclusion.stage),
        prop: print_proposition(&d.conclusion.prop),
        premises: d.premises.iter().map(derivation_to_record).collect(),
    }
}

pub fn parse_derivation(src: &str) -> Result<Derivation, CliError> {
    let rec: DerivationRecord = ron::from_str(src).map_err(|e| CliError::Format(e.to_string()))?;
    derivation_from_record(&rec)
}

pub fn print_derivation(d: &Derivation) -> String {
    ron::ser::to_string_pretty(&derivation_to_record(d), ron::ser::PrettyConfig::default())
        .expect("derivation records always serialize")
}

pub fn model_from_record(r: &ModelRecord, mode: ModelMode) -> Result<KripkeModel, CliError> {
    let mut index = BTreeMap::new();
    for (i, s) in r.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            return Err(CliError::Format(format!("state `{s}` is listed twice")));
        }
    }
    let state = |s: &str| index.get(s).copied().ok_or_else(|| CliError::Format(format!("unknown state `{s}`")));
    let mut labels = BTreeSet::new();
    for l in &r.labels {
        if !labels.insert(l.as_str()) {
            return Err(CliError::Format(format!("label `{l}` is listed twice")));
        }
    }
    let mut transitions = vec![vec![None; r.states.len()]; r.labels.len()];
    let mut seen = BTreeSet::new();
    for t in &r.transitions {
        let Some(li) = r.labels.iter().position(|l| *l == t.label) else {
            return Err(CliError::Format(format!("transitions for unknown label `{}`", t.label)));
        };
        if !seen.insert(li) {
            return Err(CliError::Format(format!("label `{}` has two transition tables", t.label)));
        }
        for (from, to) in &t.rows {
            let (f, g) = (state(from)?, state(to)?);
            if transitions[li][f].replace(g).is_some() {
                return Err(CliError::Format(format!("label `{}` has two rows for state `{from}`", t.label)));
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for v in &r.valuation {
        let set = v.states.iter().map(|s| state(s)).collect::<Result<BTreeSet<_>, _>>()?;
        valuation.entry(sym(&v.atom)).or_insert_with(BTreeSet::new).extend(set);
    }
    let model = KripkeModel {
        mode,
        states: r.states.len(),
        labels: r.labels.iter().map(|l| sym(l)).collect(),
        transitions,
        valuation,
    };
    model.validate()?;
    Ok(model)
}

pub fn model_to_record(m: &KripkeModel) -> ModelRecord {
    let name = |i: usize| format!("s{i}");
    ModelRecord {
        states: (0..m.states).map(name).collect(),
        labels: m.labels.iter().map(|l| l.to_string()).collect(),
        transitions: m
            .labels
            .iter()
            .zip(&m.transitions)
            .map(|(l, t)| TransitionRecord {
                label: l.to_string(),
                rows: t.iter().enumerate().filter_map(|(i, s)| s.map(|s| (name(i), name(s)))).collect(),
            })
            .collect(),
        valuation: m
            .valuation
            .iter()
            .map(|(a, set)| ValuationRecord { atom: a.to_string(), states: set.iter().map(|&s| name(s)).collect() })
            .collect(),
    }
}

pub fn parse_model(src: &str, mode: ModelMode) -> Result<KripkeModel, CliError> {
    Ok(parse_model_named(src, mode)?.0)
}

/// The model together with the state names used in the file.
pub fn parse_model_named(src: &str, mode: ModelMode) -> Result<(KripkeModel, Vec<String>), CliError> {
    let rec: ModelRecord = ron::from_str(src).map_err(|e| CliError::Format(e.to_string()))?;
    Ok((model_from_record(&rec, mode)?, rec.states))
}

pub fn print_model(m: &KripkeModel) -> String {
    ron::ser::to_string_pretty(&model_to_record(m), ron::ser::PrettyConfig::default())
        .expect("model records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use stagecraft_core::logic::{random_model, ModelError};
    use stagecraft_core::syntax::Type;

    #[test]
    fn model_round_trip() {
        for seed in 0..20 {
            let m = random_model(3, 2, ModelMode::Partial, seed);
            assert_eq!(parse_model(&print_model(&m), ModelMode::Partial).unwrap(), m);
        }
    }

    #[test]
    fn partial_rows_need_partial_mode() {
        let src = r#"(states: ["s", "t"], labels: ["a"], transitions: [(label: "a", rows: [("s", "t")])])"#;
        assert!(parse_model(src, ModelMode::Partial).is_ok());
        let e = parse_model(src, ModelMode::Total).unwrap_err();
        assert!(matches!(e, CliError::Model(ModelError::NotTotal { label: 0 })));
    }

    #[test]
    fn bad_model_files() {
        let unknown = r#"(states: ["s"], labels: ["a"], transitions: [(label: "a", rows: [("s", "u")])])"#;
        assert!(matches!(parse_model(unknown, ModelMode::Total), Err(CliError::Format(_))));
        assert!(matches!(parse_model("(states: [", ModelMode::Total), Err(CliError::Format(_))));
    }

    #[test]
    fn derivation_fields() {
        let src = r#"(
            rule: CodeI,
            context: [(prop: "p", at: "[a]")],
            prop: "<a>p",
            premises: [(rule: Hyp, context: [(prop: "p", at: "[a]")], stage: "[a]", prop: "p")],
        )"#;
        let d = parse_derivation(src).unwrap();
        assert_eq!(d.conclusion.prop, Type::code(TVar::free("a"), Type::base("p")));
        assert_eq!(d.premises[0].conclusion.stage, Transition::from_names(&["a"]));
        assert_eq!(parse_derivation(&print_derivation(&d)).unwrap(), d);
    }
}
