use alloc::collections::btree_map::{self, BTreeMap};
use alloc::collections::BTreeSet;

use super::name::{sym, Symbol};
use super::path::Transition;
use super::ty::Type;

/// `Γ`: distinct term variables with a type and a declaration stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypingContext {
    entries: BTreeMap<Symbol, (Type, Transition)>,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    pub fn with(mut self, x: &str, t: Type, stage: Transition) -> TypingContext {
        self.entries.insert(sym(x), (t, stage));
        self
    }

    pub fn insert(&mut self, x: Symbol, t: Type, stage: Transition) {
        self.entries.insert(x, (t, stage));
    }

    pub fn extended(&self, x: Symbol, t: Type, stage: Transition) -> TypingContext {
        let mut c = self.clone();
        c.insert(x, t, stage);
        c
    }

    pub fn get(&self, x: &str) -> Option<&(Type, Transition)> {
        self.entries.get(x)
    }

    pub fn remove(&mut self, x: &str) {
        self.entries.remove(x);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Symbol, (Type, Transition)> {
        self.entries.iter()
    }

    pub fn names(&self) -> BTreeSet<Symbol> {
        self.entries.keys().cloned().collect()
    }

    pub fn collect_fmv(&self, out: &mut BTreeSet<Symbol>) {
        for (t, a) in self.entries.values() {
            t.collect_fmv(out);
            a.collect_fmv(out);
        }
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_fmv(&mut out);
        out
    }

    /// All names mentioned, term and transition; used to pick fresh names.
    pub fn avoid_set(&self) -> BTreeSet<Symbol> {
        let mut out = self.names();
        self.collect_fmv(&mut out);
        out
    }

    pub fn subst_tvar(&self, alpha: &Symbol, b: &Transition) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .map(|(x, (t, a))| (x.clone(), (t.subst_tvar(alpha, b), a.subst(alpha, b))))
                .collect(),
        }
    }

    /// `Γ−A`: entries whose stage starts with `A`, with the prefix removed.
    pub fn restrict(&self, prefix: &Transition) -> TypingContext {
        TypingContext {
            entries: self
                .entries
                .iter()
                .filter_map(|(x, (t, a))| a.strip_prefix(prefix).map(|rest| (x.clone(), (t.clone(), rest))))
                .collect(),
        }
    }

    /// No entry lives at the empty stage.
    pub fn is_epsilon_free(&self) -> bool {
        self.entries.values().all(|(_, a)| !a.is_empty())
    }
}

impl FromIterator<(Symbol, (Type, Transition))> for TypingContext {
    fn from_iter<I: IntoIterator<Item = (Symbol, (Type, Transition))>>(iter: I) -> Self {
        TypingContext { entries: iter.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_strips_prefix() {
        let b = Type::base("b");
        let g = TypingContext::new().with("x", b.clone(), Transition::from_names(&["a", "c"])).with(
            "y",
            b.clone(),
            Transition::from_names(&["c"]),
        );
        let r = g.restrict(&Transition::from_names(&["a"]));
        assert_eq!(r, TypingContext::new().with("x", b.clone(), Transition::from_names(&["c"])));
        assert_eq!(g.restrict(&Transition::epsilon()), g);
        let h = TypingContext::new().with("x", b, Transition::from_names(&["a"]));
        assert!(h.restrict(&Transition::from_names(&["a", "c"])).is_empty());
    }

    #[test]
    fn epsilon_free() {
        let b = Type::base("b");
        assert!(TypingContext::new().with("x", b.clone(), Transition::from_names(&["a"])).is_epsilon_free());
        assert!(!TypingContext::new().with("x", b, Transition::epsilon()).is_epsilon_free());
        assert!(TypingContext::new().is_epsilon_free());
    }

    #[test]
    fn context_fmv() {
        let g = TypingContext::new().with(
            "x",
            Type::code(super::super::TVar::free("a"), Type::base("b")),
            Transition::from_names(&["c"]),
        );
        assert_eq!(g.fmv(), [sym("a"), sym("c")].into_iter().collect());
    }
}
