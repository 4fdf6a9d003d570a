use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::pick_weighted;
use crate::syntax::{sym, BinOp, Symbol, TVar, Term, Transition, Type, TypingContext};

/// Shape of the generated corpus.
#[derive(Clone, Debug)]
pub struct TermConfig {
    pub max_size: usize,
    /// Distinct transition variable names, free or bound.
    pub max_tvars: usize,
    /// Literals, arithmetic, conditionals and (optionally) `fix`.
    pub miniml: bool,
    pub allow_fix: bool,
    /// Free variables are only placed at non-empty stages.
    pub epsilon_free: bool,
}

impl TermConfig {
    pub fn pure() -> TermConfig {
        TermConfig { max_size: 30, max_tvars: 3, miniml: false, allow_fix: false, epsilon_free: false }
    }

    pub fn miniml() -> TermConfig {
        TermConfig { max_size: 30, max_tvars: 3, miniml: true, allow_fix: true, epsilon_free: true }
    }
}

/// A term with the context of its free variables and its type at `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedTerm {
    pub ctx: TypingContext,
    pub term: Term,
    pub ty: Type,
}

const FREE_TVARS: [&str; 3] = ["a", "c", "d"];

/// Draws a well-typed term, retrying until an attempt succeeds.
pub fn random_term<R: Rng>(rng: &mut R, cfg: &TermConfig) -> GeneratedTerm {
    loop {
        if let Some(g) = try_random_term(rng, cfg) {
            return g;
        }
    }
}

pub fn try_random_term<R: Rng>(rng: &mut R, cfg: &TermConfig) -> Option<GeneratedTerm> {
    let mut g = Gen {
        rng,
        cfg,
        holes: TypingContext::new(),
        scope: Vec::new(),
        bound: Vec::new(),
        tvars: BTreeSet::new(),
        counter: 0,
        steps: 0,
    };
    let depth = g.rng.random_range(0..3);
    let ty = g.ty(depth);
    let size = g.rng.random_range(cfg.max_size / 3..=cfg.max_size);
    let term = g.term(&Transition::epsilon(), &ty, size)?;
    if term.size() > cfg.max_size {
        return None;
    }
    Some(GeneratedTerm { ctx: g.holes, term, ty })
}

struct Gen<'a, R> {
    rng: &'a mut R,
    cfg: &'a TermConfig,
    holes: TypingContext,
    /// Variables bound by enclosing `λ`/`fix`.
    scope: Vec<(Symbol, Type, Transition)>,
    /// Transition variables bound by enclosing `Λ`.
    bound: Vec<Symbol>,
    tvars: BTreeSet<Symbol>,
    counter: usize,
    steps: usize,
}

#[derive(Clone, Copy)]
enum Choice {
    Var,
    Hole,
    Lit,
    Intro,
    App,
    Beta,
    Prev,
    Splice,
    TApp,
    Arith,
    If,
    Fix,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, stem: &str) -> Symbol {
        self.counter += 1;
        sym(&format!("{stem}{}", self.counter))
    }

    fn can_add_tvar(&self) -> bool {
        self.tvars.len() < self.cfg.max_tvars
    }

    fn fresh_tvar(&mut self) -> Option<Symbol> {
        if !self.can_add_tvar() {
            return None;
        }
        let g = self.fresh("g");
        self.tvars.insert(g.clone());
        Some(g)
    }

    /// A free or `Λ`-bound variable, staying within the name budget.
    fn pick_tvar(&mut self) -> Option<TVar> {
        let mut cands: Vec<Symbol> = self.bound.clone();
        for v in FREE_TVARS {
            let s = sym(v);
            if self.tvars.contains(&s) || self.can_add_tvar() {
                cands.push(s);
            }
        }
        if cands.is_empty() {
            return None;
        }
        let v = cands[self.rng.random_range(0..cands.len())].clone();
        self.tvars.insert(v.clone());
        Some(TVar::Free(v))
    }

    fn base(&mut self) -> Type {
        if self.cfg.miniml {
            if self.rng.random_bool(0.7) {
                Type::Int
            } else {
                Type::Bool
            }
        } else {
            Type::base("b")
        }
    }

    fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 {
            return self.base();
        }
        match self.rng.random_range(0..6) {
            0 | 1 => Type::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            2 | 3 => match self.pick_tvar() {
                Some(v) => Type::code(v, self.ty(depth - 1)),
                None => self.base(),
            },
            4 => match self.fresh_tvar() {
                Some(g) => {
                    self.bound.push(g.clone());
                    let body = Type::code(TVar::Free(g.clone()), self.ty(depth - 1));
                    self.bound.pop();
                    Type::forall(&g, body)
                }
                None => self.base(),
            },
            _ => self.base(),
        }
    }

    fn mentions_bound(&self, names: &BTreeSet<Symbol>) -> bool {
        self.bound.iter().any(|b| names.contains(b))
    }

    fn hole_allowed(&self, stage: &Transition, ty: &Type) -> bool {
        if self.cfg.epsilon_free && stage.is_empty() {
            return false;
        }
        let mut names = ty.fmv();
        stage.collect_fmv(&mut names);
        !self.mentions_bound(&names)
    }

    fn term(&mut self, stage: &Transition, ty: &Type, size: usize) -> Option<Term> {
        self.steps += 1;
        if self.steps > 400 {
            return None;
        }
        let vars: Vec<Symbol> =
            self.scope.iter().filter(|(_, t, s)| t == ty && s == stage).map(|(x, _, _)| x.clone()).collect();
        let base = matches!(ty, Type::Int | Type::Bool);
        let intro = matches!(ty, Type::Arrow(..) | Type::Code(..) | Type::Forall(..));
        let mut opts: Vec<(Choice, u32)> = Vec::new();
        let boost = if size > 4 { 3 } else { 1 };
        if !vars.is_empty() {
            opts.push((Choice::Var, 3));
        }
        if self.hole_allowed(stage, ty) {
            opts.push((Choice::Hole, if size <= 1 { 4 } else { 1 }));
        }
        if self.cfg.miniml && base {
            opts.push((Choice::Lit, if size <= 1 { 4 } else { 1 }));
        }
        if (size > 1 || opts.is_empty()) && intro {
            opts.push((Choice::Intro, 4 * boost));
        }
        if size > 2 {
            opts.push((Choice::App, 2 * boost));
            opts.push((Choice::Beta, 3 * boost));
            if !stage.is_empty() {
                opts.push((Choice::Prev, 2 * boost));
                opts.push((Choice::Splice, 2 * boost));
            }
            opts.push((Choice::TApp, 2 * boost));
            if self.cfg.miniml {
                if base {
                    opts.push((Choice::Arith, 2 * boost));
                }
                opts.push((Choice::If, boost));
                if self.cfg.allow_fix && matches!(ty, Type::Arrow(..)) {
                    opts.push((Choice::Fix, boost));
                }
            }
        }
        if opts.is_empty() {
            return None;
        }
        match pick_weighted(self.rng, &opts) {
            Choice::Var => Some(Term::var(&vars[self.rng.random_range(0..vars.len())])),
            Choice::Hole => {
                let h = self.fresh("h");
                self.holes.insert(h.clone(), ty.clone(), stage.clone());
                Some(Term::var(&h))
            }
            Choice::Lit => Some(match ty {
                Type::Int => Term::int(self.rng.random_range(-3..10)),
                _ => Term::Bool(self.rng.random_bool(0.5)),
            }),
            Choice::Intro => self.intro(stage, ty, size.saturating_sub(1)),
            Choice::App => {
                let arg = if !self.scope.is_empty() && self.rng.random_bool(0.3) {
                    self.scope[self.rng.random_range(0..self.scope.len())].1.clone()
                } else {
                    let d = self.rng.random_range(0..2);
                    self.ty(d)
                };
                let (l, r) = self.split(size - 1);
                let f = self.term(stage, &Type::arrow(arg.clone(), ty.clone()), l)?;
                let a = self.term(stage, &arg, r)?;
                Some(Term::app(f, a))
            }
            Choice::Beta => {
                let d = self.rng.random_range(0..2);
                let arg = self.ty(d);
                let (l, r) = self.split(size - 1);
                let f = self.intro(stage, &Type::arrow(arg.clone(), ty.clone()), l.saturating_sub(1))?;
                let a = self.term(stage, &arg, r)?;
                Some(Term::app(f, a))
            }
            Choice::Splice => {
                let (outer, last) = stage.split_last()?;
                let last = last.clone();
                let m = self.intro(&outer, &Type::code(last.clone(), ty.clone()), size - 2)?;
                Some(Term::Prev(last, Box::new(m)))
            }
            Choice::Prev => {
                let (outer, last) = stage.split_last()?;
                let last = last.clone();
                let m = self.term(&outer, &Type::code(last.clone(), ty.clone()), size - 1)?;
                Some(Term::Prev(last, Box::new(m)))
            }
            Choice::TApp => self.tapp(stage, ty, size - 1),
            Choice::Arith => {
                let (l, r) = self.split(size - 1);
                let op = match ty {
                    Type::Bool => BinOp::Eq,
                    _ => [BinOp::Add, BinOp::Sub, BinOp::Mul][self.rng.random_range(0..3)],
                };
                let x = self.term(stage, &Type::Int, l)?;
                let y = self.term(stage, &Type::Int, r)?;
                Some(Term::binop(op, x, y))
            }
            Choice::If => {
                let s = (size - 1) / 3;
                let c = self.term(stage, &Type::Bool, s.max(1))?;
                let t = self.term(stage, ty, s.max(1))?;
                let e = self.term(stage, ty, s.max(1))?;
                Some(Term::if_(c, t, e))
            }
            Choice::Fix => {
                let f = self.fresh("f");
                self.scope.push((f.clone(), ty.clone(), stage.clone()));
                let body = self.intro(stage, ty, size - 2);
                self.scope.pop();
                Some(Term::fix(&f, ty.clone(), body?))
            }
        }
    }

    fn split(&mut self, size: usize) -> (usize, usize) {
        let l = if size > 1 { self.rng.random_range(1..size) } else { 1 };
        (l, size.saturating_sub(l).max(1))
    }

    fn intro(&mut self, stage: &Transition, ty: &Type, size: usize) -> Option<Term> {
        let size = size.max(1);
        match ty {
            Type::Arrow(dom, cod) => {
                let x = self.fresh("x");
                self.scope.push((x.clone(), (**dom).clone(), stage.clone()));
                let body = self.term(stage, cod, size);
                self.scope.pop();
                Some(Term::lam(&x, (**dom).clone(), body?))
            }
            Type::Code(v, body) => {
                let m = self.term(&stage.pushed(v.clone()), body, size)?;
                Some(Term::Next(v.clone(), Box::new(m)))
            }
            Type::Forall(_, body) => {
                let g = self.fresh("g");
                let opened = body.open_tvar(&Transition::single(TVar::Free(g.clone())));
                self.bound.push(g.clone());
                let m = self.term(stage, &opened, size);
                self.bound.pop();
                Some(Term::gen(&g, m?))
            }
            _ => None,
        }
    }

    /// `M B : τ` from `M : ∀β.⟨β⟩ρ` where `τ = ⟨B⟩ρ`, or a vacuous instance.
    fn tapp(&mut self, stage: &Transition, ty: &Type, size: usize) -> Option<Term> {
        let mut chain = Vec::new();
        let mut rest = ty;
        while let Type::Code(v, body) = rest {
            chain.push(v.clone());
            rest = body;
        }
        let beta = self.fresh_tvar()?;
        let vacuous = self.rng.random_ratio(1, 5);
        let (b, poly_body) = if vacuous {
            let b = match self.pick_tvar() {
                Some(v) if self.rng.random_bool(0.5) => Transition::single(v),
                _ => Transition::epsilon(),
            };
            (b, ty.clone())
        } else {
            let k = self.rng.random_range(0..=chain.len());
            let mut rho = ty;
            for _ in 0..k {
                if let Type::Code(_, body) = rho {
                    rho = body;
                }
            }
            (Transition(chain[..k].to_vec()), Type::code(TVar::Free(beta.clone()), rho.clone()))
        };
        let poly = Type::forall(&beta, poly_body);
        let m = self.term(stage, &poly, size)?;
        Some(Term::tapp(m, b))
    }
}
