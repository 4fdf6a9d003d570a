//! The logic read off the type system: propositions with falsity, natural
//! deduction with classical rules, and Kripke semantics over finite
//! transition systems.

mod model;
mod proof;

pub use model::{
    boxed_at, holds_locally, random_model, satisfies, transition_monoid, KripkeModel, LogicError, ModelError,
    ModelMode, StateMap, TransValuation, RANDOM_ATOMS,
};
pub use proof::{
    check_derivation, ClassicalMode, Derivation, DerivationError, DerivationErrorKind, Judgment, LogicContext,
    Proposition, Rule,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{sym, TVar, Transition, Type};
    use alloc::collections::{BTreeMap, BTreeSet};
    use alloc::vec;
    use alloc::vec::Vec;

    fn eps() -> Transition {
        Transition::epsilon()
    }

    fn at(a: &str) -> Transition {
        Transition::from_names(&[a])
    }

    fn p() -> Type {
        Type::base("p")
    }

    fn code(a: &str, t: Type) -> Type {
        Type::code(TVar::free(a), t)
    }

    fn ctx(items: &[(Type, Transition)]) -> LogicContext {
        items.iter().cloned().collect()
    }

    fn node(rule: Rule, g: &LogicContext, a: &Transition, phi: Type, premises: Vec<Derivation>) -> Derivation {
        Derivation::new(rule, Judgment::new(g.clone(), a.clone(), phi), premises)
    }

    #[test]
    fn identity_and_code_intro() {
        let b = Type::base("b");
        let g1 = ctx(&[(b.clone(), eps())]);
        let d = node(
            Rule::ArrowI,
            &LogicContext::new(),
            &eps(),
            Type::arrow(b.clone(), b.clone()),
            vec![node(Rule::Hyp, &g1, &eps(), b, vec![])],
        );
        assert!(check_derivation(&d, ClassicalMode::SameStage).is_ok());
        let g = ctx(&[(p(), at("a"))]);
        let d = node(Rule::CodeI, &g, &eps(), code("a", p()), vec![node(Rule::Hyp, &g, &at("a"), p(), vec![])]);
        assert!(check_derivation(&d, ClassicalMode::SameStage).is_ok());
    }

    fn double_negation() -> Derivation {
        // ⊢ ((p→⊥)→⊥)→p
        let nnp = Type::not(Type::not(p()));
        let g1 = ctx(&[(nnp.clone(), eps())]);
        let g2 = ctx(&[(nnp.clone(), eps()), (Type::not(p()), eps())]);
        let bot = node(
            Rule::ArrowE,
            &g2,
            &eps(),
            Type::Bottom,
            vec![
                node(Rule::Hyp, &g2, &eps(), nnp.clone(), vec![]),
                node(Rule::Hyp, &g2, &eps(), Type::not(p()), vec![]),
            ],
        );
        let body = node(Rule::BotE, &g1, &eps(), p(), vec![bot]);
        node(Rule::ArrowI, &LogicContext::new(), &eps(), Type::arrow(nnp, p()), vec![body])
    }

    #[test]
    fn classical_double_negation() {
        assert!(check_derivation(&double_negation(), ClassicalMode::AnyStage).is_ok());
        assert!(check_derivation(&double_negation(), ClassicalMode::SameStage).is_ok());
    }

    fn diamond_bot_axiom() -> Derivation {
        // ⊢ ∀a.(⟨a⟩⊥ → ⊥)
        let cb = code("a", Type::Bottom);
        let g1 = ctx(&[(cb.clone(), eps())]);
        let g2 = ctx(&[(cb.clone(), eps()), (Type::not(Type::Bottom), eps())]);
        let at_a =
            node(Rule::CodeE, &g2, &at("a"), Type::Bottom, vec![node(Rule::Hyp, &g2, &eps(), cb.clone(), vec![])]);
        let bot = node(Rule::BotE, &g1, &eps(), Type::Bottom, vec![at_a]);
        let imp = node(Rule::ArrowI, &LogicContext::new(), &eps(), Type::arrow(cb.clone(), Type::Bottom), vec![bot]);
        node(
            Rule::ForallI { eigen: sym("a") },
            &LogicContext::new(),
            &eps(),
            Type::forall("a", Type::arrow(cb, Type::Bottom)),
            vec![imp],
        )
    }

    #[test]
    fn stage_of_falsity_separates_modes() {
        let d = diamond_bot_axiom();
        assert!(check_derivation(&d, ClassicalMode::AnyStage).is_ok());
        let e = check_derivation(&d, ClassicalMode::SameStage).unwrap_err();
        assert_eq!(e.kind, DerivationErrorKind::SideConditionFailure);
        assert_eq!(e.path, vec![0, 0]);
    }

    #[test]
    fn self_duality_only_with_free_stage() {
        // ¬⟨a⟩¬p → ⟨a⟩p
        let ncnp = Type::not(code("a", Type::not(p())));
        let g1 = ctx(&[(ncnp.clone(), eps())]);
        let g2 = ctx(&[(ncnp.clone(), eps()), (Type::not(p()), at("a"))]);
        let inner = node(
            Rule::CodeI,
            &g2,
            &eps(),
            code("a", Type::not(p())),
            vec![node(Rule::Hyp, &g2, &at("a"), Type::not(p()), vec![])],
        );
        let bot = node(
            Rule::ArrowE,
            &g2,
            &eps(),
            Type::Bottom,
            vec![node(Rule::Hyp, &g2, &eps(), ncnp.clone(), vec![]), inner],
        );
        let pa = node(Rule::BotE, &g1, &at("a"), p(), vec![bot]);
        let d = node(
            Rule::ArrowI,
            &LogicContext::new(),
            &eps(),
            Type::arrow(ncnp, code("a", p())),
            vec![node(Rule::CodeI, &g1, &eps(), code("a", p()), vec![pa])],
        );
        assert!(check_derivation(&d, ClassicalMode::AnyStage).is_ok());
        assert!(check_derivation(&d, ClassicalMode::SameStage).is_err());
    }

    #[test]
    fn bad_derivations() {
        let g = LogicContext::new();
        let d = node(Rule::Hyp, &g, &eps(), p(), vec![]);
        assert_eq!(
            check_derivation(&d, ClassicalMode::AnyStage).unwrap_err().kind,
            DerivationErrorKind::SideConditionFailure
        );
        let g1 = ctx(&[(p(), eps())]);
        let d = node(Rule::ArrowE, &g1, &eps(), p(), vec![node(Rule::Hyp, &g1, &eps(), p(), vec![])]);
        assert_eq!(
            check_derivation(&d, ClassicalMode::AnyStage).unwrap_err().kind,
            DerivationErrorKind::PremiseShapeError
        );
        let d = node(Rule::CodeI, &g1, &eps(), code("a", p()), vec![node(Rule::Hyp, &g1, &eps(), p(), vec![])]);
        assert_eq!(check_derivation(&d, ClassicalMode::AnyStage).unwrap_err().kind, DerivationErrorKind::RuleMismatch);
        // eigenvariable free in the context
        let g2 = ctx(&[(code("a", p()), eps())]);
        let d = node(
            Rule::ForallI { eigen: sym("a") },
            &g2,
            &eps(),
            Type::forall("a", code("a", p())),
            vec![node(Rule::Hyp, &g2, &eps(), code("a", p()), vec![])],
        );
        assert_eq!(
            check_derivation(&d, ClassicalMode::AnyStage).unwrap_err().kind,
            DerivationErrorKind::SideConditionFailure
        );
    }

    #[test]
    fn forall_elimination_substitutes() {
        let all = Type::forall("a", code("a", p()));
        let g = ctx(&[(all.clone(), eps())]);
        let inst = Transition::from_names(&["b", "c"]);
        let d = node(
            Rule::ForallE { instance: inst },
            &g,
            &eps(),
            code("b", code("c", p())),
            vec![node(Rule::Hyp, &g, &eps(), all, vec![])],
        );
        assert!(check_derivation(&d, ClassicalMode::SameStage).is_ok());
    }

    fn model(mode: ModelMode, states: usize, transitions: Vec<StateMap>, p_at: &[usize]) -> KripkeModel {
        let labels = (0..transitions.len()).map(|i| sym(&alloc::format!("l{i}"))).collect();
        let mut valuation = BTreeMap::new();
        valuation.insert(sym("p"), p_at.iter().copied().collect::<BTreeSet<_>>());
        KripkeModel { mode, states, labels, transitions, valuation }
    }

    #[test]
    fn monoids() {
        let m = model(ModelMode::Total, 1, vec![vec![Some(0)]], &[]);
        assert_eq!(transition_monoid(&m), vec![vec![Some(0)]]);
        let swap = model(ModelMode::Total, 2, vec![vec![Some(1), Some(0)]], &[]);
        assert_eq!(transition_monoid(&swap).len(), 2);
        let undef = model(ModelMode::Partial, 1, vec![vec![None]], &[]);
        let mut mon = transition_monoid(&undef);
        mon.sort();
        assert_eq!(mon, vec![vec![None], vec![Some(0)]]);
    }

    #[test]
    fn satisfaction_clauses() {
        let one = model(ModelMode::Total, 1, vec![vec![Some(0)]], &[0]);
        let rho = TransValuation::new();
        assert_eq!(satisfies(&one, &rho, 0, &Type::forall("a", code("a", p()))), Ok(true));
        let mut rho = TransValuation::new();
        rho.insert(sym("a"), vec![Some(0)]);
        assert_eq!(satisfies(&one, &rho, 0, &code("a", Type::arrow(p(), p()))), Ok(true));
        assert_eq!(satisfies(&one, &rho, 0, &code("a", Type::Bottom)), Ok(false));
        let undef = model(ModelMode::Partial, 1, vec![vec![None]], &[]);
        let mut rho = TransValuation::new();
        rho.insert(sym("a"), undef.induced(&[0]));
        assert_eq!(satisfies(&undef, &rho, 0, &code("a", Type::Bottom)), Ok(true));
        assert_eq!(
            satisfies(&undef, &TransValuation::new(), 0, &code("z", p())),
            Err(LogicError::UnboundTransitionVar(sym("z")))
        );
    }

    #[test]
    fn local_consequence() {
        let m = random_model(3, 2, ModelMode::Total, 5);
        assert!(holds_locally(&m, &ctx(&[(p(), at("a"))]), &code("a", p())));
        let empty = model(ModelMode::Total, 1, vec![vec![Some(0)]], &[]);
        assert!(!holds_locally(&empty, &LogicContext::new(), &p()));
        let axiom = Type::arrow(code("a", Type::Bottom), code("b", Type::Bottom));
        for seed in 0..10 {
            assert!(holds_locally(&random_model(2, 2, ModelMode::Total, seed), &LogicContext::new(), &axiom));
        }
        // l0 defined, l1 undefined: ⟨a⟩⊥ holds with a = l1 but ⟨b⟩⊥ fails with b = l0
        let split = model(ModelMode::Partial, 1, vec![vec![Some(0)], vec![None]], &[]);
        assert!(!holds_locally(&split, &LogicContext::new(), &axiom));
    }

    #[test]
    fn random_models_are_deterministic() {
        assert_eq!(random_model(3, 2, ModelMode::Partial, 7), random_model(3, 2, ModelMode::Partial, 7));
        let m = random_model(3, 2, ModelMode::Partial, 7);
        assert!(m.validate().is_ok());
        assert!(m.transitions.iter().all(|t| t.len() == 3));
        let t = random_model(1, 1, ModelMode::Total, 0);
        assert_eq!(t.transitions, vec![vec![Some(0)]]);
    }

    #[test]
    fn derived_theorems_hold_in_models() {
        for seed in 0..20 {
            let total = random_model(2, 2, ModelMode::Total, seed);
            let partial = random_model(2, 2, ModelMode::Partial, seed);
            let j = check_derivation(&diamond_bot_axiom(), ClassicalMode::AnyStage).unwrap();
            assert!(holds_locally(&total, &j.context, &j.prop));
            let j = check_derivation(&double_negation(), ClassicalMode::SameStage).unwrap();
            assert!(holds_locally(&partial, &j.context, &j.prop));
        }
    }
}
