use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stagecraft_core::logic::{random_model, satisfies, KripkeModel, ModelMode, TransValuation};
use stagecraft_core::syntax::{sym, Symbol, TVar, Type};

/// Closed propositions over atoms p, q with quantifier depth at most 2.
fn random_prop(rng: &mut ChaCha8Rng, depth: usize, quants: usize, scope: &mut Vec<Symbol>) -> Type {
    let leaf = |rng: &mut ChaCha8Rng| match rng.random_range(0..3) {
        0 => Type::base("p"),
        1 => Type::base("q"),
        _ => Type::Bottom,
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..5) {
        0 => leaf(rng),
        1 => Type::arrow(random_prop(rng, depth - 1, quants, scope), random_prop(rng, depth - 1, quants, scope)),
        2 | 3 if !scope.is_empty() => {
            let v = scope[rng.random_range(0..scope.len())].clone();
            Type::code(TVar::Free(v), random_prop(rng, depth - 1, quants, scope))
        }
        _ if quants < 2 => {
            let a = sym(&format!("v{}", scope.len()));
            scope.push(a.clone());
            let body = random_prop(rng, depth - 1, quants + 1, scope);
            scope.pop();
            Type::forall(&a, body)
        }
        _ => leaf(rng),
    }
}

/// Satisfaction with quantifiers ranging over every label sequence up to
/// `max_len`, with transition variables bound to sequences.
struct Oracle<'m> {
    model: &'m KripkeModel,
    words: Vec<Vec<usize>>,
}

impl Oracle<'_> {
    fn new(model: &KripkeModel, max_len: usize) -> Oracle<'_> {
        let mut words = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..model.labels.len() {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        Oracle { model, words }
    }

    fn run(&self, s: usize, w: &[usize]) -> Option<usize> {
        w.iter().try_fold(s, |s, &l| self.model.transitions[l][s])
    }

    fn sat(&self, env: &mut Vec<(Symbol, Vec<usize>)>, s: usize, phi: &Type) -> bool {
        match phi {
            Type::Base(p) => self.model.valuation.get(p).is_some_and(|set| set.contains(&s)),
            Type::Bottom => false,
            Type::Arrow(a, b) => !self.sat(env, s, a) || self.sat(env, s, b),
            Type::Code(TVar::Free(v), body) => {
                let w = env.iter().rev().find(|(x, _)| x == v).map(|(_, w)| w.clone()).expect("bound");
                match self.run(s, &w) {
                    Some(t) => self.sat(env, t, body),
                    None => true,
                }
            }
            Type::Forall(h, body) => {
                let x = sym(&format!("{}'{}", h.as_str(), env.len()));
                let opened = body.open_tvar(&stagecraft_core::syntax::Transition::single(TVar::Free(x.clone())));
                self.words.iter().all(|w| {
                    env.push((x.clone(), w.clone()));
                    let r = self.sat(env, s, &opened);
                    env.pop();
                    r
                })
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

fn check_exactness(states: usize, labels: usize, mode: ModelMode, seed: u64) {
    let model = random_model(states, labels, mode, seed);
    let max_len = match mode {
        ModelMode::Total => states.pow(states as u32),
        ModelMode::Partial => (states + 1).pow(states as u32) - 1,
    };
    let oracle = Oracle::new(&model, max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let phi = random_prop(&mut rng, 4, 0, &mut Vec::new());
        for s in 0..states {
            let fast = satisfies(&model, &TransValuation::new(), s, &phi).unwrap();
            assert_eq!(fast, oracle.sat(&mut Vec::new(), s, &phi), "{phi:?} at {s} in {model:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn monoid_quantification_matches_sequences_total(seed in any::<u64>(), states in 1usize..=2, labels in 1usize..=3) {
        check_exactness(states, labels, ModelMode::Total, seed);
    }

    #[test]
    fn monoid_quantification_matches_sequences_partial(seed in any::<u64>(), states in 1usize..=2, labels in 1usize..=2) {
        check_exactness(states, labels, ModelMode::Partial, seed);
    }
}
