use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stagecraft_core::eval::{eval, eval_staged, is_value, EvalResult, StagedResult};
use stagecraft_core::gen::{random_staged, random_term, StagedConfig, TermConfig};
use stagecraft_core::staged::{erase, erased_eval, staged_typecheck, ErasedResult};
use stagecraft_core::syntax::{Term, Transition, Type};
use stagecraft_core::typing::{restrict_context, typecheck};

const FUEL: u64 = 20_000;

/// Evaluation recurses once per nested rule application, so deep runs get
/// their own thread with a large stack.
fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new().stack_size(1 << 30).spawn(f).unwrap().join().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn converging_programs_return_typed_values(seed in any::<u64>()) {
        let g = random_term(&mut ChaCha8Rng::seed_from_u64(seed), &TermConfig::miniml());
        let eps = Transition::epsilon();
        let m = g.term.clone();
        match on_big_stack(move || eval(&Transition::epsilon(), &m, FUEL)) {
            EvalResult::Value(v) => {
                prop_assert!(is_value(&eps, &v), "{:?}", v);
                prop_assert_eq!(typecheck(&g.ctx, &eps, &v).ok(), Some(g.ty.clone()));
                if let Type::Code(a, t0) = &g.ty {
                    let Term::Next(b, n) = &v else { panic!("code value expected, got {v:?}") };
                    prop_assert_eq!(a, b);
                    let inner = restrict_context(&g.ctx, &Transition::single(a.clone()));
                    prop_assert_eq!(typecheck(&inner, &eps, n).ok(), Some((**t0).clone()));
                }
            }
            EvalResult::Err => prop_assert!(false, "well-typed program went wrong: {:?}", g.term),
            EvalResult::FuelExhausted => {}
        }
    }

    #[test]
    fn erasure_commutes_with_evaluation(seed in any::<u64>()) {
        let g = random_staged(&mut ChaCha8Rng::seed_from_u64(seed), &StagedConfig::default());
        let eps = Transition::epsilon();
        prop_assert_eq!(staged_typecheck(&g.ctx, &g.delta, &eps, &g.term).ok(), Some(g.ty.clone()));
        let m = g.term.clone();
        let (staged, erased) = on_big_stack(move || {
            (eval_staged(&Transition::epsilon(), &m, FUEL), erased_eval(0, &erase(&m), FUEL))
        });
        match (staged, erased) {
            (StagedResult::Value(n), ErasedResult::Value(e)) => prop_assert_eq!(erase(&n), e),
            (StagedResult::FuelExhausted, ErasedResult::FuelExhausted) => {}
            (s, e) => prop_assert!(false, "{:?} vs {:?} for {:?}", s, e, g.term),
        }
    }
}
