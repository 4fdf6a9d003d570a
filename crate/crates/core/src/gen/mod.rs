//! Seeded generators of well-typed terms for the property suites.

mod lambda;
mod source;
mod staged;

pub use lambda::{random_term, try_random_term, GeneratedTerm, TermConfig};
pub use source::{random_box, random_circle, random_lambda_i, GeneratedBox, GeneratedCircle, GeneratedLi};
pub use staged::{base_env, random_staged, try_random_staged, GeneratedStaged, StagedConfig};

use rand::Rng;

fn pick_weighted<R: Rng, T: Copy>(rng: &mut R, opts: &[(T, u32)]) -> T {
    let total: u32 = opts.iter().map(|(_, w)| w).sum();
    let mut x = rng.random_range(0..total);
    for (t, w) in opts {
        if x < *w {
            return *t;
        }
        x -= w;
    }
    opts[opts.len() - 1].0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{box_typecheck, circle_typecheck, li_typecheck};
    use crate::staged::staged_typecheck;
    use crate::syntax::Transition;
    use crate::typing::typecheck;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_terms_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = TermConfig::pure();
        let mut with_gen = 0;
        for _ in 0..300 {
            let g = random_term(&mut rng, &cfg);
            assert!(g.term.size() <= 30);
            assert!(g.term.is_pure());
            let mut names = g.term.fmv();
            g.ctx.collect_fmv(&mut names);
            assert!(names.len() <= 3, "{names:?}");
            let t =
                typecheck(&g.ctx, &Transition::epsilon(), &g.term).unwrap_or_else(|e| panic!("{e} in {:?}", g.term));
            assert_eq!(t, g.ty);
            if alloc::format!("{:?}", g.term).contains("Gen(") {
                with_gen += 1;
            }
        }
        assert!(with_gen > 30);
    }

    #[test]
    fn miniml_terms_typecheck_under_epsilon_free_contexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let g = random_term(&mut rng, &TermConfig::miniml());
            assert!(g.ctx.is_epsilon_free());
            assert_eq!(typecheck(&g.ctx, &Transition::epsilon(), &g.term).unwrap(), g.ty);
        }
    }

    #[test]
    fn staged_programs_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sins = 0;
        for _ in 0..300 {
            let g = random_staged(&mut rng, &StagedConfig::default());
            assert!(g.ctx.values().all(|(_, a)| !a.is_empty()));
            let t = staged_typecheck(&g.ctx, &g.delta, &Transition::epsilon(), &g.term)
                .unwrap_or_else(|e| panic!("{e} in {:?}", g.term));
            assert_eq!(t, g.ty);
            if alloc::format!("{:?}", g.term).contains("SIns") {
                sins += 1;
            }
        }
        assert!(sins > 10);
    }

    #[test]
    fn source_terms_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let g = random_circle(&mut rng, 20);
            assert_eq!(circle_typecheck(&g.ctx, 0, &g.term), Some(g.ty));
            let g = random_box(&mut rng, 20);
            assert_eq!(box_typecheck(&g.stack, &g.term), Some(g.ty));
            let g = random_lambda_i(&mut rng, 20);
            assert_eq!(li_typecheck(&g.ctx, &Transition::epsilon(), &g.term), Some(g.ty));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_term(&mut ChaCha8Rng::seed_from_u64(9), &TermConfig::pure());
        let b = random_term(&mut ChaCha8Rng::seed_from_u64(9), &TermConfig::pure());
        assert_eq!(a, b);
    }
}
