use proptest::prelude::*;
use stagecraft_core::syntax::{path_leq, Letter, Path, TVar};

fn letter(v: u8, inverse: bool) -> Letter {
    Letter { var: TVar::free(["a", "b", "c"][v as usize]), inverse }
}

fn word() -> impl Strategy<Value = Vec<(u8, bool)>> {
    prop::collection::vec((0u8..3, any::<bool>()), 0..8)
}

fn letters(w: &[(u8, bool)]) -> Vec<Letter> {
    w.iter().map(|&(v, i)| letter(v, i)).collect()
}

/// Deletes adjacent inverse pairs anywhere until none remain.
fn rewrite_to_fixpoint(mut w: Vec<Letter>) -> Vec<Letter> {
    loop {
        let hit = w.windows(2).position(|p| p[0].var == p[1].var && p[0].inverse != p[1].inverse);
        match hit {
            Some(i) => {
                w.drain(i..i + 2);
            }
            None => return w,
        }
    }
}

fn inverse_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| Letter { var: l.var.clone(), inverse: !l.inverse }).collect()
}

fn path(w: &[(u8, bool)]) -> Path {
    Path::from_letters(letters(w))
}

proptest! {
    #[test]
    fn canonical_form_matches_rewriting(w in word()) {
        let canon = path(&w);
        let expected = rewrite_to_fixpoint(letters(&w));
        prop_assert_eq!(canon.letters(), expected.as_slice());
    }

    #[test]
    fn canonical_forms_are_unique(w1 in word(), w2 in word()) {
        let mut both = letters(&w1);
        both.extend(inverse_word(&letters(&w2)));
        let equal_in_group = rewrite_to_fixpoint(both).is_empty();
        prop_assert_eq!(path(&w1) == path(&w2), equal_in_group);
    }

    #[test]
    fn leq_is_reflexive_and_transitive(w1 in word(), w2 in word(), w3 in word()) {
        let (t, u, v) = (path(&w1), path(&w2), path(&w3));
        prop_assert!(path_leq(&t, &t));
        if path_leq(&t, &u) && path_leq(&u, &v) {
            prop_assert!(path_leq(&t, &v));
        }
        if path_leq(&t, &u) && path_leq(&u, &t) {
            prop_assert_eq!(t, u);
        }
    }

    #[test]
    fn leq_after_positive_extension(w in word(), ext in prop::collection::vec(0u8..3, 0..4)) {
        let t = path(&w);
        let a = Path::from_letters(ext.iter().map(|&v| letter(v, false)));
        prop_assert!(path_leq(&t, &t.concat(&a)));
    }

    #[test]
    fn group_laws(w1 in word(), w2 in word()) {
        let (t, u) = (path(&w1), path(&w2));
        prop_assert_eq!(t.concat(&t.inverse()), Path::epsilon());
        prop_assert_eq!(t.concat(&u).inverse(), u.inverse().concat(&t.inverse()));
    }
}
