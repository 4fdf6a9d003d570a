use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::proof::{LogicContext, Proposition};
use crate::syntax::{sym, Symbol, TVar, Transition, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelMode {
    Total,
    Partial,
}

/// A (possibly partial) function on states; `None` means undefined.
pub type StateMap = Vec<Option<usize>>;

/// Finite transition system with a valuation of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub mode: ModelMode,
    pub states: usize,
    pub labels: Vec<Symbol>,
    /// One state map per label.
    pub transitions: Vec<StateMap>,
    /// The states at which each atom holds.
    pub valuation: BTreeMap<Symbol, BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("label count and transition table disagree")]
    LabelMismatch,
    #[error("transition for label {label} has the wrong number of entries")]
    WrongArity { label: usize },
    #[error("transition for label {label} leaves the state set")]
    OutOfRange { label: usize },
    #[error("transition for label {label} is undefined somewhere in a total model")]
    NotTotal { label: usize },
    #[error("atom `{atom}` holds at a state outside the model")]
    ValuationOutOfRange { atom: Symbol },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("transition variable `{0}` has no value")]
    UnboundTransitionVar(Symbol),
    #[error("transition variable `{0}` is not a label of the model")]
    UnknownLabel(Symbol),
    #[error("dangling bound transition variable")]
    IllFormed,
}

/// `ρ`, represented by the induced state maps.
pub type TransValuation = BTreeMap<Symbol, StateMap>;

impl KripkeModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.states == 0 {
            return Err(ModelError::NoStates);
        }
        if self.labels.len() != self.transitions.len() {
            return Err(ModelError::LabelMismatch);
        }
        for (label, t) in self.transitions.iter().enumerate() {
            if t.len() != self.states {
                return Err(ModelError::WrongArity { label });
            }
            if t.iter().flatten().any(|&s| s >= self.states) {
                return Err(ModelError::OutOfRange { label });
            }
            if self.mode == ModelMode::Total && t.iter().any(Option::is_none) {
                return Err(ModelError::NotTotal { label });
            }
        }
        for (atom, set) in &self.valuation {
            if set.iter().any(|&s| s >= self.states) {
                return Err(ModelError::ValuationOutOfRange { atom: atom.clone() });
            }
        }
        Ok(())
    }

    pub fn atom_holds(&self, s: usize, atom: &str) -> bool {
        self.valuation.get(atom).is_some_and(|set| set.contains(&s))
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| &**l == name)
    }

    /// Follows a label sequence from `s`.
    pub fn run(&self, s: usize, labels: &[usize]) -> Option<usize> {
        labels.iter().try_fold(s, |cur, &l| self.transitions[l][cur])
    }

    /// The state map induced by a label sequence.
    pub fn induced(&self, labels: &[usize]) -> StateMap {
        (0..self.states).map(|s| self.run(s, labels)).collect()
    }

    pub fn identity(&self) -> StateMap {
        (0..self.states).map(Some).collect()
    }

    /// `ρ` that maps each variable named like a label to that label.
    pub fn label_valuation(&self) -> TransValuation {
        self.labels.iter().enumerate().map(|(i, l)| (l.clone(), self.transitions[i].clone())).collect()
    }
}

fn then(f: &StateMap, g: &StateMap) -> StateMap {
    f.iter().map(|s| s.and_then(|s| g[s])).collect()
}

/// Every state map induced by some label sequence, identity included.
pub fn transition_monoid(model: &KripkeModel) -> Vec<StateMap> {
    let id = model.identity();
    let mut seen = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(f) = queue.pop_front() {
        for t in &model.transitions {
            let g = then(&f, t);
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    seen.into_iter().collect()
}

struct Sat<'m> {
    model: &'m KripkeModel,
    monoid: Vec<StateMap>,
}

impl Sat<'_> {
    fn lookup<'a>(
        &'a self,
        rho: &'a TransValuation,
        bound: &'a [StateMap],
        v: &TVar,
    ) -> Result<&'a StateMap, LogicError> {
        match v {
            TVar::Free(s) => rho.get(s).ok_or_else(|| LogicError::UnboundTransitionVar(s.clone())),
            TVar::Bound(i) => {
                let i = *i as usize;
                if i < bound.len() {
                    Ok(&bound[bound.len() - 1 - i])
                } else {
                    Err(LogicError::IllFormed)
                }
            }
        }
    }

    fn sat(
        &self,
        rho: &TransValuation,
        bound: &mut Vec<StateMap>,
        s: usize,
        phi: &Proposition,
    ) -> Result<bool, LogicError> {
        Ok(match phi {
            Type::Base(p) => self.model.atom_holds(s, p),
            Type::Int => self.model.atom_holds(s, "int"),
            Type::Bool => self.model.atom_holds(s, "bool"),
            Type::Bottom => false,
            Type::Arrow(a, b) => !self.sat(rho, bound, s, a)? || self.sat(rho, bound, s, b)?,
            Type::Code(v, body) => match self.lookup(rho, bound, v)?[s] {
                Some(t) => self.sat(rho, bound, t, body)?,
                None => true,
            },
            Type::Forall(_, body) => {
                for i in 0..self.monoid.len() {
                    bound.push(self.monoid[i].clone());
                    let r = self.sat(rho, bound, s, body);
                    bound.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }
}

/// `T, v, ρ; s ⊩ φ`. Quantifiers range over the transition monoid, which
/// is exact because satisfaction depends on `ρ(α)` only through the map
/// it induces.
pub fn satisfies(model: &KripkeModel, rho: &TransValuation, s: usize, phi: &Proposition) -> Result<bool, LogicError> {
    let sat = Sat { model, monoid: transition_monoid(model) };
    sat.sat(rho, &mut Vec::new(), s, phi)
}

/// `⟨A⟩φ`
pub fn boxed_at(a: &Transition, phi: &Proposition) -> Proposition {
    Type::code_at(a, phi.clone())
}

/// Local consequence in one model: at every state and for every `ρ` over
/// the free variables, `Γ` implies `φ`.
pub fn holds_locally(model: &KripkeModel, ctx: &LogicContext, phi: &Proposition) -> bool {
    let sat = Sat { model, monoid: transition_monoid(model) };
    let mut vars = phi.fmv();
    for (psi, a) in ctx {
        psi.collect_fmv(&mut vars);
        a.collect_fmv(&mut vars);
    }
    let vars: Vec<Symbol> = vars.into_iter().collect();
    let hyps: Vec<Proposition> = ctx.iter().map(|(psi, a)| boxed_at(a, psi)).collect();
    let n = sat.monoid.len();
    let mut choice = alloc::vec![0usize; vars.len()];
    loop {
        let rho: TransValuation = vars.iter().zip(&choice).map(|(v, &i)| (v.clone(), sat.monoid[i].clone())).collect();
        for s in 0..model.states {
            let mut bound = Vec::new();
            let premises = hyps.iter().all(|h| sat.sat(&rho, &mut bound, s, h).unwrap_or(false));
            if premises && !sat.sat(&rho, &mut bound, s, phi).unwrap_or(false) {
                return false;
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return true;
            }
            choice[k] += 1;
            if choice[k] < n {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Atoms that random models give a valuation to.
pub const RANDOM_ATOMS: [&str; 4] = ["p", "q", "r", "b"];

/// A deterministic pseudo-random model. Labels are named `l0`, `l1`, ….
pub fn random_model(state_count: usize, label_count: usize, mode: ModelMode, seed: u64) -> KripkeModel {
    let states = state_count.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..label_count).map(|i| sym(&alloc::format!("l{i}"))).collect();
    let transitions = (0..label_count)
        .map(|_| {
            (0..states)
                .map(|_| {
                    if mode == ModelMode::Partial && rng.random_ratio(1, 3) {
                        None
                    } else {
                        Some(rng.random_range(0..states))
                    }
                })
                .collect()
        })
        .collect();
    let valuation =
        RANDOM_ATOMS.iter().map(|a| (sym(a), (0..states).filter(|_| rng.random_bool(0.5)).collect())).collect();
    KripkeModel { mode, states, labels, transitions, valuation }
}
