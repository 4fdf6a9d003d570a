//! parse(print(x)) == x for everything the generators produce.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stagecraft::formats::{parse_derivation, parse_model, print_derivation, print_model};
use stagecraft::input;
use stagecraft::proofs::curated;
use stagecraft::syntax::{convert, document_to_string, node_to_string, parse_type, type_to_string};
use stagecraft_core::gen::{
    random_box, random_circle, random_lambda_i, random_staged, random_term, StagedConfig, TermConfig,
};
use stagecraft_core::logic::{random_model, ModelMode};
use stagecraft_core::staged::erase;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pure_terms(seed in any::<u64>()) {
        let g = random_term(&mut rng(seed), &TermConfig::pure());
        let text = document_to_string(&convert::document(convert::from_context(&g.ctx).unwrap(), convert::from_term(&g.term)));
        let (ctx, m) = input::plain(&text).unwrap();
        prop_assert_eq!(ctx, g.ctx);
        prop_assert_eq!(m, g.term);
        let t = type_to_string(&convert::from_type(&g.ty));
        prop_assert_eq!(convert::to_type(&parse_type(&t).unwrap(), Default::default()).unwrap(), g.ty);
    }

    #[test]
    fn miniml_terms(seed in any::<u64>()) {
        let g = random_term(&mut rng(seed), &TermConfig::miniml());
        let text = document_to_string(&convert::document(convert::from_context(&g.ctx).unwrap(), convert::from_term(&g.term)));
        let (ctx, m) = input::plain(&text).unwrap();
        prop_assert_eq!(ctx, g.ctx);
        prop_assert_eq!(m, g.term);
    }

    #[test]
    fn staged_programs(seed in any::<u64>()) {
        let g = random_staged(&mut rng(seed), &StagedConfig::default());
        let text = document_to_string(&convert::document(
            convert::from_staged_env(&g.ctx, &g.delta),
            convert::from_staged(&g.term),
        ));
        let (ctx, delta, m) = input::staged(&text).unwrap();
        prop_assert_eq!(ctx, g.ctx);
        prop_assert_eq!(delta, g.delta);
        prop_assert_eq!(&m, &g.term);
        let t = type_to_string(&convert::from_staged_type(&g.ty));
        prop_assert_eq!(convert::to_staged_type(&parse_type(&t).unwrap(), Default::default()).unwrap(), g.ty);

        let e = erase(&g.term);
        prop_assert_eq!(input::erased(&node_to_string(&convert::from_erased(&e))).unwrap(), e);
    }

    #[test]
    fn circle_terms(seed in any::<u64>()) {
        let g = random_circle(&mut rng(seed), 25);
        let text = document_to_string(&convert::document(convert::from_circle_context(&g.ctx), convert::from_circle(&g.term)));
        let (ctx, m) = input::circle(&text).unwrap();
        prop_assert_eq!(ctx, g.ctx);
        prop_assert_eq!(m, g.term);
        let t = type_to_string(&convert::from_circle_type(&g.ty));
        prop_assert_eq!(convert::to_circle_type(&parse_type(&t).unwrap(), Default::default()).unwrap(), g.ty);
    }

    #[test]
    fn box_terms(seed in any::<u64>()) {
        let g = random_box(&mut rng(seed), 25);
        let text = document_to_string(&convert::document(convert::from_box_stack(&g.stack), convert::from_box(&g.term)));
        let (stack, m) = input::boxed(&text).unwrap();
        prop_assert_eq!(stack, g.stack);
        prop_assert_eq!(m, g.term);
        let t = type_to_string(&convert::from_box_type(&g.ty));
        prop_assert_eq!(convert::to_box_type(&parse_type(&t).unwrap(), Default::default()).unwrap(), g.ty);
    }

    #[test]
    fn lambda_i_terms(seed in any::<u64>()) {
        let g = random_lambda_i(&mut rng(seed), 25);
        let text = document_to_string(&convert::document(convert::from_li_context(&g.ctx), convert::from_li(&g.term)));
        let (ctx, m) = input::lambda_i(&text).unwrap();
        prop_assert_eq!(ctx, g.ctx);
        prop_assert_eq!(m, g.term);
        let t = type_to_string(&convert::from_li_type(&g.ty));
        prop_assert_eq!(convert::to_li_type(&parse_type(&t).unwrap(), Default::default()).unwrap(), g.ty);
    }

    #[test]
    fn models(seed in any::<u64>(), states in 1usize..5, labels in 1usize..4, partial in any::<bool>()) {
        let mode = if partial { ModelMode::Partial } else { ModelMode::Total };
        let m = random_model(states, labels, mode, seed);
        prop_assert_eq!(parse_model(&print_model(&m), mode).unwrap(), m);
    }
}

#[test]
fn curated_derivations() {
    for c in curated() {
        assert_eq!(parse_derivation(&print_derivation(&c.derivation)).unwrap(), c.derivation, "{}", c.name);
    }
}

#[test]
fn power_corpus() {
    use stagecraft::input::examples::*;
    for src in [POWER0, POWER1, POWER_ALPHA, POWER_ALPHA3, POWER2, POWER_FORALL, POWER_FORALL_RUN] {
        let (ctx, delta, m) = input::staged(src).unwrap();
        let text =
            document_to_string(&convert::document(convert::from_staged_env(&ctx, &delta), convert::from_staged(&m)));
        assert_eq!(input::staged(&text).unwrap(), (ctx, delta, m), "{text}");
        if let Ok((ctx, m)) = input::plain(src) {
            let text =
                document_to_string(&convert::document(convert::from_context(&ctx).unwrap(), convert::from_term(&m)));
            assert_eq!(input::plain(&text).unwrap(), (ctx, m), "{text}");
        }
    }
}

#[test]
fn printed_forms() {
    let (_, m) = input::plain("assume x : b -> b @ [a]; assume y : b @ [a]; next[a] (x y)").unwrap();
    assert_eq!(node_to_string(&convert::from_term(&m)), "next[a] (x y)");
    let t = convert::to_type(&parse_type("forall a. <a>(b -> b)").unwrap(), Default::default()).unwrap();
    assert_eq!(type_to_string(&convert::from_type(&t)), "forall a. <a>(b -> b)");
}
