use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use core::cmp::Ordering;
use core::hash::{Hash, Hasher};

/// Interned-ish identifier shared between threads.
pub type Symbol = Arc<str>;

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

/// Printing hint for a binder. Hints never take part in comparisons, so
/// structural equality on locally nameless syntax is alpha-equivalence.
#[derive(Clone, Debug)]
pub struct Hint(pub Symbol);

impl Hint {
    pub fn new(s: &str) -> Hint {
        Hint(sym(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Hint) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Hint) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// Picks a name based on `hint` that is not in `avoid`: the hint itself if
/// possible, otherwise its alphabetic stem followed by the smallest free
/// numeric suffix.
pub fn fresh(hint: &str, avoid: &BTreeSet<Symbol>) -> Symbol {
    if !hint.is_empty() && !avoid.contains(hint) {
        return sym(hint);
    }
    let stem = hint.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    let mut i = 1u32;
    loop {
        let cand = format!("{stem}{i}");
        if !avoid.contains(cand.as_str()) {
            return sym(&cand);
        }
        i += 1;
    }
}
