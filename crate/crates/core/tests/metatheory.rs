use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stagecraft_core::gen::{random_term, GeneratedTerm, TermConfig};
use stagecraft_core::reduction::{
    complete_development, is_t_normal, is_t_normal_direct, natural_projection, normalize, normalize_trace,
    parallel_reduce_check, parallel_reducts, redexes, RedexKind,
};
use stagecraft_core::syntax::{sym, Letter, Path, Symbol, TVar, Term, Transition, TypingContext, Var};
use stagecraft_core::typing::typecheck;

fn corpus_term(seed: u64) -> GeneratedTerm {
    random_term(&mut ChaCha8Rng::seed_from_u64(seed), &TermConfig::pure())
}

fn eps() -> Transition {
    Transition::epsilon()
}

/// Renames every free variable of `g` with a prefix so it can be merged
/// with another generated context.
fn prefixed(g: &GeneratedTerm, prefix: &str) -> (TypingContext, Term) {
    let mut ctx = TypingContext::new();
    let mut term = g.term.clone();
    for (x, (t, a)) in g.ctx.iter() {
        let y = sym(&format!("{prefix}{x}"));
        term = term.subst_term(x, &Term::Var(Var::Free(y.clone())));
        ctx.insert(y, t.clone(), a.clone());
    }
    (ctx, term)
}

fn random_transition(rng: &mut ChaCha8Rng) -> Transition {
    let n = rng.random_range(0..3);
    Transition((0..n).map(|_| TVar::free(["a", "c", "d"][rng.random_range(0..3)])).collect())
}

fn random_path(rng: &mut ChaCha8Rng) -> Path {
    let n = rng.random_range(0..4);
    Path::from_letters(
        (0..n).map(|_| Letter {
            var: TVar::free(["a", "c", "d"][rng.random_range(0..3)]),
            inverse: rng.random_bool(0.4),
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn one_step_reducts_keep_their_type(seed in any::<u64>()) {
        let g = corpus_term(seed);
        for s in redexes(&g.term) {
            prop_assert_eq!(typecheck(&g.ctx, &eps(), &s.result).ok(), Some(g.ty.clone()));
        }
    }

    #[test]
    fn parallel_reducts_meet_at_the_development(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let dev = complete_development(&g.term);
        prop_assert!(parallel_reduce_check(&g.term, &dev));
        for n in parallel_reducts(&g.term).into_iter().take(64) {
            prop_assert!(parallel_reduce_check(&n, &dev));
        }
    }

    #[test]
    fn normal_forms_exist_and_are_typed(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let n = normalize(&g.term, 10_000).expect("pure terms normalize");
        prop_assert!(redexes(&n).is_empty());
        prop_assert_eq!(typecheck(&g.ctx, &eps(), &n).ok(), Some(g.ty));
    }

    #[test]
    fn inductive_and_direct_t_normality_agree(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut terms = vec![g.term.clone()];
        terms.extend(redexes(&g.term).into_iter().map(|s| s.result));
        let none = BTreeSet::new();
        for m in &terms {
            for _ in 0..4 {
                let t = random_path(&mut rng);
                prop_assert_eq!(is_t_normal(&none, &t, m), is_t_normal_direct(&none, &t, m), "{:?} at {:?}", m, t);
            }
        }
    }

    #[test]
    fn substitution_preserves_types(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let Some((x, (sigma, b))) = g.ctx.iter().next().map(|(x, e)| (x.clone(), e.clone())) else {
            return Ok(());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        // Draw arguments until one has the hole's type at its stage.
        let arg = (0..400).find_map(|_| {
            let n = random_term(&mut rng, &TermConfig::pure());
            (n.ty == sigma && b.is_empty()).then_some(n)
        });
        let Some(arg) = arg else { return Ok(()) };
        let (nctx, n) = prefixed(&arg, "n_");
        let mut ctx = g.ctx.clone();
        ctx.remove(&x);
        for (y, (t, a)) in nctx.iter() {
            ctx.insert(y.clone(), t.clone(), a.clone());
        }
        prop_assert_eq!(typecheck(&ctx, &eps(), &g.term.subst_term(&x, &n)).ok(), Some(g.ty));
    }

    #[test]
    fn transition_substitution_preserves_types(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(3));
        let alpha: Symbol = sym(["a", "c", "d"][rng.random_range(0..3)]);
        let b = random_transition(&mut rng);
        let ctx = g.ctx.subst_tvar(&alpha, &b);
        let m = g.term.subst_tvar(&alpha, &b);
        prop_assert_eq!(typecheck(&ctx, &eps(), &m).ok(), Some(g.ty.subst_tvar(&alpha, &b)));
    }

    #[test]
    fn substitutions_commute(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let n = corpus_term(seed.wrapping_add(7));
        let (_, n) = prefixed(&n, "n_");
        let Some(x) = g.ctx.names().into_iter().next() else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = sym(["a", "c", "d"][rng.random_range(0..3)]);
        let b = random_transition(&mut rng);
        let lhs = g.term.subst_term(&x, &n).subst_tvar(&alpha, &b);
        let rhs = g.term.subst_tvar(&alpha, &b).subst_term(&x, &n.subst_tvar(&alpha, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_follows_beta_steps_only(seed in any::<u64>()) {
        let g = corpus_term(seed);
        let (_, trace) = normalize_trace(&g.term, 10_000).unwrap();
        let mut cur = natural_projection(&g.term).unwrap();
        for s in &trace {
            let next = natural_projection(&s.result).unwrap();
            if s.kind == RedexKind::Beta {
                prop_assert!(cur.beta_reducts().contains(&next));
            } else {
                prop_assert_eq!(&cur, &next);
            }
            cur = next;
        }
    }
}
