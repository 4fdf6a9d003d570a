use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::name::Symbol;

/// A transition variable occurrence: either a free name or a de Bruijn
/// index pointing at an enclosing `gen`/`forall` binder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TVar {
    Free(Symbol),
    Bound(u32),
}

impl TVar {
    pub fn free(s: &str) -> TVar {
        TVar::Free(super::sym(s))
    }

    pub fn name(&self) -> Option<&Symbol> {
        match self {
            TVar::Free(s) => Some(s),
            TVar::Bound(_) => None,
        }
    }
}

/// A stage: a finite sequence of transition variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition(pub Vec<TVar>);

impl Transition {
    pub fn epsilon() -> Transition {
        Transition(Vec::new())
    }

    pub fn single(v: TVar) -> Transition {
        Transition(alloc::vec![v])
    }

    pub fn from_names(names: &[&str]) -> Transition {
        Transition(names.iter().map(|n| TVar::free(n)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[TVar] {
        &self.0
    }

    pub fn concat(&self, other: &Transition) -> Transition {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Transition(v)
    }

    pub fn pushed(&self, v: TVar) -> Transition {
        let mut out = self.0.clone();
        out.push(v);
        Transition(out)
    }

    /// Splits `A'α` into `(A', α)`.
    pub fn split_last(&self) -> Option<(Transition, &TVar)> {
        let (last, init) = self.0.split_last()?;
        Some((Transition(init.to_vec()), last))
    }

    pub fn strip_prefix(&self, prefix: &Transition) -> Option<Transition> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|rest| Transition(rest.to_vec()))
    }

    pub fn collect_fmv(&self, out: &mut BTreeSet<Symbol>) {
        for v in &self.0 {
            if let TVar::Free(s) = v {
                out.insert(s.clone());
            }
        }
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_fmv(&mut out);
        out
    }

    /// Replaces variables for which `f` returns a transition, splicing the
    /// replacement in place.
    pub fn map_tvars(&self, depth: u32, f: &mut dyn FnMut(&TVar, u32) -> Option<Transition>) -> Transition {
        let mut out = Vec::with_capacity(self.0.len());
        for v in &self.0 {
            match f(v, depth) {
                Some(b) => out.extend(b.0),
                None => out.push(v.clone()),
            }
        }
        Transition(out)
    }

    pub fn subst(&self, alpha: &Symbol, b: &Transition) -> Transition {
        self.map_tvars(0, &mut |v, _| match v {
            TVar::Free(s) if s == alpha => Some(b.clone()),
            _ => None,
        })
    }
}

/// One letter of a path: a variable or its formal inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub var: TVar,
    pub inverse: bool,
}

/// An element of the free group over transition variables, kept in
/// canonical (fully cancelled) form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<Letter>);

impl Path {
    pub fn epsilon() -> Path {
        Path(Vec::new())
    }

    /// Canonicalizes an arbitrary word.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Path {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(top) if top.var == l.var && top.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Path(out)
    }

    pub fn var(v: TVar) -> Path {
        Path(alloc::vec![Letter { var: v, inverse: false }])
    }

    pub fn inv_var(v: TVar) -> Path {
        Path(alloc::vec![Letter { var: v, inverse: true }])
    }

    pub fn from_transition(a: &Transition) -> Path {
        Path(a.0.iter().map(|v| Letter { var: v.clone(), inverse: false }).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Path) -> Path {
        Path::from_letters(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn inverse(&self) -> Path {
        Path(self.0.iter().rev().map(|l| Letter { var: l.var.clone(), inverse: !l.inverse }).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| !l.inverse)
    }

    pub fn inverse_count(&self) -> usize {
        self.0.iter().filter(|l| l.inverse).count()
    }

    pub fn as_positive(&self) -> Option<Transition> {
        if self.is_positive() {
            Some(Transition(self.0.iter().map(|l| l.var.clone()).collect()))
        } else {
            None
        }
    }

    /// `T ≤ U` iff `T⁻¹·U` is positive.
    pub fn leq(&self, other: &Path) -> bool {
        self.inverse().concat(other).is_positive()
    }

    /// Substitutes the empty transition for a variable.
    pub fn erase_var(&self, alpha: &Symbol) -> Path {
        Path::from_letters(self.0.iter().filter(|l| !matches!(&l.var, TVar::Free(s) if s == alpha)).cloned())
    }

    pub fn fmv(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for l in &self.0 {
            if let TVar::Free(s) = &l.var {
                out.insert(s.clone());
            }
        }
        out
    }
}

pub fn path_concat(t: &Path, u: &Path) -> Path {
    t.concat(u)
}

pub fn path_inverse(t: &Path) -> Path {
    t.inverse()
}

pub fn path_leq(t: &Path, u: &Path) -> bool {
    t.leq(u)
}

pub fn as_positive(t: &Path) -> Option<Transition> {
    t.as_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(word: &str) -> Path {
        // lowercase letter = variable, uppercase = its inverse
        Path::from_letters(
            word.chars().map(|c| Letter {
                var: TVar::free(&c.to_ascii_lowercase().to_string()),
                inverse: c.is_ascii_uppercase(),
            }),
        )
    }

    #[test]
    fn concat_cancels() {
        assert_eq!(p("aB").concat(&p("bc")), p("ac"));
        assert_eq!(Path::epsilon().concat(&p("aB")), p("aB"));
        assert_eq!(p("A").concat(&p("a")), Path::epsilon());
    }

    #[test]
    fn inverse_laws() {
        assert_eq!(p("ab").inverse(), p("BA"));
        assert_eq!(Path::epsilon().inverse(), Path::epsilon());
        assert_eq!(p("A").inverse(), p("a"));
        let t = p("aBcA");
        assert_eq!(t.concat(&t.inverse()), Path::epsilon());
    }

    #[test]
    fn leq_examples() {
        assert!(Path::epsilon().leq(&p("ab")));
        assert!(p("A").leq(&Path::epsilon()));
        // b⁻¹·(b a) = a
        assert!(p("B").leq(&p("a")));
        assert!(!p("a").leq(&p("b")));
        assert!(!Path::epsilon().leq(&p("A")));
    }

    #[test]
    fn positivity() {
        assert_eq!(p("ab").as_positive(), Some(Transition::from_names(&["a", "b"])));
        assert_eq!(p("A").as_positive(), None);
        assert_eq!(p("aA").as_positive(), Some(Transition::epsilon()));
    }

    #[test]
    fn transition_subst_splices() {
        let t = Transition::from_names(&["a", "b", "a"]);
        let b = Transition::from_names(&["c", "d"]);
        assert_eq!(t.subst(&crate::sym("a"), &b), Transition::from_names(&["c", "d", "b", "c", "d"]));
        assert_eq!(t.subst(&crate::sym("a"), &Transition::epsilon()), Transition::from_names(&["b"]));
    }
}
