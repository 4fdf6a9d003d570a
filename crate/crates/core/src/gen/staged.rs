use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::pick_weighted;
use crate::staged::{wf_transition, wf_type, StagedContext, StagedTerm, StagedType, TransitionEnv};
use crate::syntax::{sym, BinOp, Symbol, TVar, Transition};

#[derive(Clone, Debug)]
pub struct StagedConfig {
    pub max_size: usize,
    pub allow_fix: bool,
}

impl Default for StagedConfig {
    fn default() -> StagedConfig {
        StagedConfig { max_size: 30, allow_fix: true }
    }
}

/// A staged-typed program at `ε` with an `ε`-free context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedStaged {
    pub ctx: StagedContext,
    pub delta: TransitionEnv,
    pub term: StagedTerm,
    pub ty: StagedType,
}

/// The fixed environment programs are generated under.
pub fn base_env() -> TransitionEnv {
    let mut delta = TransitionEnv::new();
    delta.insert(sym("a"), Transition::epsilon());
    delta.insert(sym("c"), Transition::from_names(&["a"]));
    delta.insert(sym("d"), Transition::epsilon());
    delta
}

pub fn random_staged<R: Rng>(rng: &mut R, cfg: &StagedConfig) -> GeneratedStaged {
    loop {
        if let Some(g) = try_random_staged(rng, cfg) {
            return g;
        }
    }
}

pub fn try_random_staged<R: Rng>(rng: &mut R, cfg: &StagedConfig) -> Option<GeneratedStaged> {
    let delta = base_env();
    let mut g = Gen {
        rng,
        cfg,
        holes: StagedContext::new(),
        scope: Vec::new(),
        delta: delta.clone(),
        bound: Vec::new(),
        counter: 0,
        steps: 0,
    };
    let eps = Transition::epsilon();
    let depth = g.rng.random_range(0..3);
    let ty = g.ty(&eps, depth);
    let size = g.rng.random_range(cfg.max_size / 3..=cfg.max_size);
    let term = g.term(&eps, &ty, size)?;
    if term.size() > cfg.max_size {
        return None;
    }
    Some(GeneratedStaged { ctx: g.holes, delta, term, ty })
}

struct Gen<'a, R> {
    rng: &'a mut R,
    cfg: &'a StagedConfig,
    holes: StagedContext,
    scope: Vec<(Symbol, StagedType, Transition)>,
    delta: TransitionEnv,
    bound: Vec<Symbol>,
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
    Prev,
    Ins1,
    Ins2,
    Arith,
    If,
    Fix,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, stem: &str) -> Symbol {
        self.counter += 1;
        sym(&format!("{stem}{}", self.counter))
    }

    /// Variables declared exactly at `stage`.
    fn next_vars(&self, stage: &Transition) -> Vec<Symbol> {
        self.delta.iter().filter(|(_, d)| *d == stage).map(|(v, _)| v.clone()).collect()
    }

    fn ty(&mut self, stage: &Transition, depth: usize) -> StagedType {
        let base = if self.rng.random_bool(0.7) { StagedType::Int } else { StagedType::Bool };
        if depth == 0 {
            return base;
        }
        match self.rng.random_range(0..6) {
            0 | 1 => StagedType::arrow(self.ty(stage, depth - 1), self.ty(stage, depth - 1)),
            2 | 3 => {
                let vs = self.next_vars(stage);
                if vs.is_empty() {
                    return base;
                }
                let v = TVar::Free(vs[self.rng.random_range(0..vs.len())].clone());
                let inner = stage.pushed(v.clone());
                StagedType::code(v, self.ty(&inner, depth - 1))
            }
            4 => {
                let mut decls = alloc::vec![Transition::epsilon()];
                for v in self.next_vars(stage) {
                    decls.push(Transition::single(TVar::Free(v)));
                }
                let decl = decls[self.rng.random_range(0..decls.len())].clone();
                let beta = self.fresh("g");
                self.delta.insert(beta.clone(), stage.concat(&decl));
                self.bound.push(beta.clone());
                let body = if decl.is_empty() && self.rng.random_bool(0.7) {
                    StagedType::code(
                        TVar::Free(beta.clone()),
                        self.ty(&stage.pushed(TVar::Free(beta.clone())), depth - 1),
                    )
                } else {
                    self.ty(stage, depth - 1)
                };
                self.bound.pop();
                self.delta.remove(&beta);
                StagedType::forall(&beta, decl, body)
            }
            _ => base,
        }
    }

    fn hole_allowed(&self, stage: &Transition, ty: &StagedType) -> bool {
        if stage.is_empty() {
            return false;
        }
        let mut names = ty.fmv();
        stage.collect_fmv(&mut names);
        !self.bound.iter().any(|b| names.contains(b))
    }

    fn term(&mut self, stage: &Transition, ty: &StagedType, size: usize) -> Option<StagedTerm> {
        self.steps += 1;
        if self.steps > 400 {
            return None;
        }
        let vars: Vec<Symbol> =
            self.scope.iter().filter(|(_, t, s)| t == ty && s == stage).map(|(x, _, _)| x.clone()).collect();
        let base = matches!(ty, StagedType::Int | StagedType::Bool);
        let mut opts: Vec<(Choice, u32)> = Vec::new();
        let boost = if size > 4 { 3 } else { 1 };
        if !vars.is_empty() {
            opts.push((Choice::Var, 3));
        }
        if self.hole_allowed(stage, ty) {
            opts.push((Choice::Hole, if size <= 1 { 4 } else { 1 }));
        }
        if base {
            opts.push((Choice::Lit, if size <= 1 { 4 } else { 1 }));
        }
        if !base && (size > 1 || opts.is_empty()) {
            opts.push((Choice::Intro, 4 * boost));
        }
        if size > 2 {
            opts.push((Choice::App, 2 * boost));
            if !stage.is_empty() {
                opts.push((Choice::Prev, 2 * boost));
            }
            opts.push((Choice::Ins1, 2 * boost));
            opts.push((Choice::Ins2, boost));
            if base {
                opts.push((Choice::Arith, 2 * boost));
            }
            opts.push((Choice::If, boost));
            if self.cfg.allow_fix && matches!(ty, StagedType::Arrow(..)) {
                opts.push((Choice::Fix, boost));
            }
        }
        if opts.is_empty() {
            return None;
        }
        match pick_weighted(self.rng, &opts) {
            Choice::Var => Some(StagedTerm::var(&vars[self.rng.random_range(0..vars.len())])),
            Choice::Hole => {
                let h = self.fresh("h");
                self.holes.insert(h.clone(), (ty.clone(), stage.clone()));
                Some(StagedTerm::var(&h))
            }
            Choice::Lit => Some(match ty {
                StagedType::Int => StagedTerm::int(self.rng.random_range(-3..10)),
                _ => StagedTerm::Bool(self.rng.random_bool(0.5)),
            }),
            Choice::Intro => self.intro(stage, ty, size.saturating_sub(1)),
            Choice::App => {
                let arg = if !self.scope.is_empty() && self.rng.random_bool(0.3) {
                    let (_, t, s) = &self.scope[self.rng.random_range(0..self.scope.len())];
                    if s == stage {
                        t.clone()
                    } else {
                        StagedType::Int
                    }
                } else {
                    let d = self.rng.random_range(0..2);
                    self.ty(stage, d)
                };
                let (l, r) = split(self.rng, size - 1);
                let f = self.term(stage, &StagedType::arrow(arg.clone(), ty.clone()), l)?;
                let a = self.term(stage, &arg, r)?;
                Some(StagedTerm::app(f, a))
            }
            Choice::Prev => {
                let (outer, last) = stage.split_last()?;
                let last = last.clone();
                let m = self.term(&outer, &StagedType::code(last.clone(), ty.clone()), size - 1)?;
                Some(StagedTerm::Prev(last, Box::new(m)))
            }
            Choice::Ins1 => self.ins1(stage, ty, size - 1),
            Choice::Ins2 => self.ins2(stage, ty, size - 1),
            Choice::Arith => {
                let (l, r) = split(self.rng, size - 1);
                let op = match ty {
                    StagedType::Bool => BinOp::Eq,
                    _ => [BinOp::Add, BinOp::Sub, BinOp::Mul][self.rng.random_range(0..3)],
                };
                let x = self.term(stage, &StagedType::Int, l)?;
                let y = self.term(stage, &StagedType::Int, r)?;
                Some(StagedTerm::binop(op, x, y))
            }
            Choice::If => {
                let s = ((size - 1) / 3).max(1);
                let c = self.term(stage, &StagedType::Bool, s)?;
                let t = self.term(stage, ty, s)?;
                let e = self.term(stage, ty, s)?;
                Some(StagedTerm::if_(c, t, e))
            }
            Choice::Fix => {
                let f = self.fresh("f");
                self.scope.push((f.clone(), ty.clone(), stage.clone()));
                let body = self.intro(stage, ty, size - 2);
                self.scope.pop();
                Some(StagedTerm::fix(&f, ty.clone(), body?))
            }
        }
    }

    fn intro(&mut self, stage: &Transition, ty: &StagedType, size: usize) -> Option<StagedTerm> {
        let size = size.max(1);
        match ty {
            StagedType::Arrow(dom, cod) => {
                let x = self.fresh("x");
                self.scope.push((x.clone(), (**dom).clone(), stage.clone()));
                let body = self.term(stage, cod, size);
                self.scope.pop();
                Some(StagedTerm::lam(&x, (**dom).clone(), body?))
            }
            StagedType::Code(v, body) => {
                let m = self.term(&stage.pushed(v.clone()), body, size)?;
                Some(StagedTerm::Next(v.clone(), Box::new(m)))
            }
            StagedType::Forall(_, decl, body) => {
                let g = self.fresh("g");
                let opened = body.open_tvar(&Transition::single(TVar::Free(g.clone())));
                self.delta.insert(g.clone(), stage.concat(decl));
                self.bound.push(g.clone());
                let m = self.term(stage, &opened, size);
                self.bound.pop();
                self.delta.remove(&g);
                Some(StagedTerm::gen(&g, decl.clone(), m?))
            }
            _ => None,
        }
    }

    /// `M B : ⟨B⟩ρ` from `M : ∀β@ε.⟨β⟩ρ`, for a prefix `B` of the code
    /// chain of the target such that the quantified type is well formed.
    fn ins1(&mut self, stage: &Transition, ty: &StagedType, size: usize) -> Option<StagedTerm> {
        let beta = self.fresh("g");
        let mut env = self.delta.clone();
        env.insert(beta.clone(), stage.clone());
        let mut cands = Vec::new();
        let mut chain = Vec::new();
        let mut rest = ty;
        loop {
            let poly_body = StagedType::code(TVar::Free(beta.clone()), rest.clone());
            if strict_wf(&env, stage, &poly_body) {
                cands.push((Transition(chain.clone()), poly_body));
            }
            match rest {
                StagedType::Code(v, body) => {
                    chain.push(v.clone());
                    rest = body;
                }
                _ => break,
            }
        }
        if cands.is_empty() {
            return None;
        }
        let (b, poly_body) = cands.swap_remove(self.rng.random_range(0..cands.len()));
        let poly = StagedType::forall(&beta, Transition::epsilon(), poly_body);
        let m = self.term(stage, &poly, size)?;
        Some(StagedTerm::tapp(m, b))
    }

    /// `M[β] : τ` from `M : ∀γ@B.τ[β:=γ]` where `β` is declared at `stage·B`.
    fn ins2(&mut self, stage: &Transition, ty: &StagedType, size: usize) -> Option<StagedTerm> {
        let cands: Vec<(Symbol, Transition)> =
            self.delta.iter().filter_map(|(v, d)| d.strip_prefix(stage).map(|b| (v.clone(), b))).collect();
        if cands.is_empty() {
            return None;
        }
        let (beta, decl) = cands[self.rng.random_range(0..cands.len())].clone();
        let body = ty.close_tvar(&beta);
        let poly = StagedType::Forall(crate::syntax::Hint::new("g"), decl, Box::new(body));
        if !strict_wf(&self.delta, stage, &poly) {
            return None;
        }
        let m = self.term(stage, &poly, size)?;
        Some(StagedTerm::SIns(Box::new(m), TVar::Free(beta)))
    }
}

fn split<R: Rng>(rng: &mut R, size: usize) -> (usize, usize) {
    let l = if size > 1 { rng.random_range(1..size) } else { 1 };
    (l, size.saturating_sub(l).max(1))
}

/// Well-formedness that also requires every declaration introduced by a
/// `∀` to be a well-formed stage, as the leaf typing rules demand.
fn strict_wf(delta: &TransitionEnv, a: &Transition, t: &StagedType) -> bool {
    match t {
        StagedType::Arrow(l, r) => strict_wf(delta, a, l) && strict_wf(delta, a, r),
        StagedType::Code(v, body) => strict_wf(delta, &a.pushed(v.clone()), body),
        StagedType::Forall(_, b, body) => {
            let decl = a.concat(b);
            if !wf_transition(delta, &decl) {
                return false;
            }
            let mut inner = delta.clone();
            let g = sym(&format!("_{}", delta.len()));
            inner.insert(g.clone(), decl);
            strict_wf(&inner, a, &body.open_tvar(&Transition::single(TVar::Free(g))))
        }
        _ => wf_type(delta, a, t),
    }
}
