use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stagecraft_core::embed::{
    embed_box, embed_box_context, embed_box_type, embed_circle, embed_circle_context, embed_circle_type,
    embed_lambda_i, embed_li_context, embed_li_type, forget_to_circle,
};
use stagecraft_core::gen::{random_box, random_circle, random_lambda_i};
use stagecraft_core::reduction::redexes;
use stagecraft_core::syntax::{TVar, Term, Transition};
use stagecraft_core::typing::typecheck;

fn alpha() -> TVar {
    TVar::free("a")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn circle_images_typecheck(seed in any::<u64>()) {
        let g = random_circle(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        let ctx = embed_circle_context(&g.ctx, &alpha());
        let image = embed_circle(&g.term, &alpha());
        prop_assert_eq!(typecheck(&ctx, &Transition::epsilon(), &image).ok(), Some(embed_circle_type(&g.ty, &alpha())));
    }

    #[test]
    fn circle_steps_correspond(seed in any::<u64>()) {
        let g = random_circle(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        let image = embed_circle(&g.term, &alpha());
        let source: Vec<Term> = g.term.reducts().iter().map(|n| embed_circle(n, &alpha())).collect();
        let target: Vec<Term> = redexes(&image).into_iter().map(|s| s.result).collect();
        prop_assert_eq!(source.len(), target.len());
        prop_assert_eq!(source.iter().collect::<BTreeSet<_>>(), target.iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn forgetting_inverts_the_circle_embedding(seed in any::<u64>()) {
        let g = random_circle(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        prop_assert_eq!(forget_to_circle(&embed_circle(&g.term, &alpha())).ok(), Some(g.term));
    }

    #[test]
    fn box_images_typecheck(seed in any::<u64>()) {
        let g = random_box(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        let eps = Transition::epsilon();
        let ctx = embed_box_context(&g.stack, &eps).unwrap();
        let image = embed_box(&g.term, &eps).unwrap();
        prop_assert_eq!(typecheck(&ctx, &eps, &image).ok(), Some(embed_box_type(&g.ty)));
    }

    #[test]
    fn lambda_i_images_typecheck(seed in any::<u64>()) {
        let g = random_lambda_i(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        let ctx = embed_li_context(&g.ctx);
        let image = embed_lambda_i(&g.term).unwrap();
        prop_assert_eq!(typecheck(&ctx, &Transition::epsilon(), &image).ok(), Some(embed_li_type(&g.ty)));
    }
}
