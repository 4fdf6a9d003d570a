use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::pick_weighted;
use crate::embed::{BoxStack, BoxTerm, BoxType, CircleContext, CircleTerm, CircleType, LiContext, LiTerm, LiType};
use crate::syntax::{sym, Symbol, TVar, Transition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedCircle {
    pub ctx: CircleContext,
    pub term: CircleTerm,
    pub ty: CircleType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedBox {
    pub stack: BoxStack,
    pub term: BoxTerm,
    pub ty: BoxType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedLi {
    pub ctx: LiContext,
    pub term: LiTerm,
    pub ty: LiType,
}

const STEP_LIMIT: usize = 300;

fn split<R: Rng>(rng: &mut R, size: usize) -> (usize, usize) {
    let l = if size > 1 { rng.random_range(1..size) } else { 1 };
    (l, size.saturating_sub(l).max(1))
}

struct Names(usize);

impl Names {
    fn fresh(&mut self, stem: &str) -> Symbol {
        self.0 += 1;
        sym(&format!("{stem}{}", self.0))
    }
}

/// Linear-time terms at level 0.
pub fn random_circle<R: Rng>(rng: &mut R, max_size: usize) -> GeneratedCircle {
    loop {
        let mut g = CircleGen { rng, holes: CircleContext::new(), scope: Vec::new(), names: Names(0), steps: 0 };
        let d = g.rng.random_range(0..3);
        let ty = g.ty(d);
        let size = g.rng.random_range(2..=max_size);
        if let Some(term) = g.term(0, &ty, size) {
            if term.size() <= max_size {
                return GeneratedCircle { ctx: g.holes, term, ty };
            }
        }
    }
}

struct CircleGen<'a, R> {
    rng: &'a mut R,
    holes: CircleContext,
    scope: Vec<(Symbol, CircleType, usize)>,
    names: Names,
    steps: usize,
}

impl<R: Rng> CircleGen<'_, R> {
    fn ty(&mut self, depth: usize) -> CircleType {
        if depth == 0 {
            return CircleType::Base(sym("b"));
        }
        match self.rng.random_range(0..5) {
            0 | 1 => CircleType::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            2 | 3 => CircleType::circle(self.ty(depth - 1)),
            _ => CircleType::Base(sym("b")),
        }
    }

    fn term(&mut self, level: usize, ty: &CircleType, size: usize) -> Option<CircleTerm> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return None;
        }
        let vars: Vec<Symbol> =
            self.scope.iter().filter(|(_, t, l)| t == ty && *l == level).map(|(x, _, _)| x.clone()).collect();
        // 0 var, 1 hole, 2 intro, 3 app, 4 prev
        let mut opts: Vec<(u8, u32)> = alloc::vec![(1, if size <= 1 { 3 } else { 1 })];
        if !vars.is_empty() {
            opts.push((0, 3));
        }
        if size > 1 && !matches!(ty, CircleType::Base(_)) {
            opts.push((2, 4));
        }
        if size > 2 {
            opts.push((3, 2));
            if level > 0 {
                opts.push((4, 2));
            }
        }
        match pick_weighted(self.rng, &opts) {
            0 => Some(CircleTerm::var(&vars[self.rng.random_range(0..vars.len())])),
            1 => {
                let h = self.names.fresh("h");
                self.holes.insert(h.clone(), (ty.clone(), level));
                Some(CircleTerm::var(&h))
            }
            2 => match ty {
                CircleType::Arrow(d, c) => {
                    let x = self.names.fresh("x");
                    self.scope.push((x.clone(), (**d).clone(), level));
                    let body = self.term(level, c, size.saturating_sub(1).max(1));
                    self.scope.pop();
                    Some(CircleTerm::lam(&x, (**d).clone(), body?))
                }
                CircleType::Circle(t) => {
                    Some(CircleTerm::next(self.term(level + 1, t, size.saturating_sub(1).max(1))?))
                }
                CircleType::Base(_) => None,
            },
            3 => {
                let d = self.rng.random_range(0..2);
                let arg = self.ty(d);
                let (l, r) = split(self.rng, size.saturating_sub(1).max(1));
                let f = self.term(level, &CircleType::arrow(arg.clone(), ty.clone()), l)?;
                let a = self.term(level, &arg, r)?;
                Some(CircleTerm::app(f, a))
            }
            _ => Some(CircleTerm::prev(self.term(
                level - 1,
                &CircleType::circle(ty.clone()),
                size.saturating_sub(1).max(1),
            )?)),
        }
    }
}

/// Kripke-style terms under a single-context stack.
pub fn random_box<R: Rng>(rng: &mut R, max_size: usize) -> GeneratedBox {
    loop {
        let mut g = BoxGen { rng, holes: BTreeMap::new(), scope: alloc::vec![Vec::new()], names: Names(0), steps: 0 };
        let d = g.rng.random_range(0..3);
        let ty = g.ty(d);
        let size = g.rng.random_range(2..=max_size);
        if let Some(term) = g.term(&ty, size) {
            if term.size() <= max_size {
                return GeneratedBox { stack: alloc::vec![g.holes], term, ty };
            }
        }
    }
}

struct BoxGen<'a, R> {
    rng: &'a mut R,
    holes: BTreeMap<Symbol, BoxType>,
    /// λ-bound variables per stack level.
    scope: Vec<Vec<(Symbol, BoxType)>>,
    names: Names,
    steps: usize,
}

impl<R: Rng> BoxGen<'_, R> {
    fn ty(&mut self, depth: usize) -> BoxType {
        if depth == 0 {
            return BoxType::Base(sym("b"));
        }
        match self.rng.random_range(0..5) {
            0 | 1 => BoxType::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            2 | 3 => BoxType::square(self.ty(depth - 1)),
            _ => BoxType::Base(sym("b")),
        }
    }

    fn term(&mut self, ty: &BoxType, size: usize) -> Option<BoxTerm> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return None;
        }
        let depth = self.scope.len() - 1;
        let vars: Vec<Symbol> = self.scope[depth].iter().filter(|(_, t)| t == ty).map(|(x, _)| x.clone()).collect();
        // 0 var, 1 hole, 2 intro, 3 app, 4 unbox
        let mut opts: Vec<(u8, u32)> = Vec::new();
        if !vars.is_empty() {
            opts.push((0, 3));
        }
        if depth == 0 {
            opts.push((1, if size <= 1 { 3 } else { 1 }));
        }
        if (size > 1 || opts.is_empty()) && !matches!(ty, BoxType::Base(_)) {
            opts.push((2, 4));
        }
        if size > 2 {
            opts.push((3, 2));
            if depth > 0 {
                opts.push((4, 3));
            }
        }
        if opts.is_empty() {
            return None;
        }
        match pick_weighted(self.rng, &opts) {
            0 => Some(BoxTerm::var(&vars[self.rng.random_range(0..vars.len())])),
            1 => {
                let h = self.names.fresh("h");
                self.holes.insert(h.clone(), ty.clone());
                Some(BoxTerm::var(&h))
            }
            2 => match ty {
                BoxType::Arrow(d, c) => {
                    let x = self.names.fresh("x");
                    self.scope[depth].push((x.clone(), (**d).clone()));
                    let body = self.term(c, size.saturating_sub(1).max(1));
                    self.scope[depth].pop();
                    Some(BoxTerm::lam(&x, (**d).clone(), body?))
                }
                BoxType::Square(t) => {
                    self.scope.push(Vec::new());
                    let body = self.term(t, size.saturating_sub(1).max(1));
                    self.scope.pop();
                    Some(BoxTerm::boxed(body?))
                }
                BoxType::Base(_) => None,
            },
            3 => {
                let d = self.rng.random_range(0..2);
                let arg = self.ty(d);
                let (l, r) = split(self.rng, size.saturating_sub(1).max(1));
                let f = self.term(&BoxType::arrow(arg.clone(), ty.clone()), l)?;
                let a = self.term(&arg, r)?;
                Some(BoxTerm::app(f, a))
            }
            _ => {
                let k = self.rng.random_range(0..=depth);
                let saved = self.scope.split_off(depth - k + 1);
                let m = self.term(&BoxType::square(ty.clone()), size.saturating_sub(1).max(1));
                self.scope.extend(saved);
                Some(BoxTerm::unbox(k, m?))
            }
        }
    }
}

const CLASSIFIERS: [&str; 2] = ["a", "c"];

/// Classifier-calculus terms at the empty stage, without `%`.
pub fn random_lambda_i<R: Rng>(rng: &mut R, max_size: usize) -> GeneratedLi {
    loop {
        let mut g =
            LiGen { rng, holes: LiContext::new(), scope: Vec::new(), closed: Vec::new(), names: Names(0), steps: 0 };
        let d = g.rng.random_range(0..3);
        let ty = g.ty(d);
        let size = g.rng.random_range(2..=max_size);
        if let Some(term) = g.term(&Transition::epsilon(), &ty, size) {
            if size_li(&term) <= max_size {
                return GeneratedLi { ctx: g.holes, term, ty };
            }
        }
    }
}

fn size_li(m: &LiTerm) -> usize {
    match m {
        LiTerm::Var(_) | LiTerm::Int(_) => 1,
        LiTerm::Lam(_, _, b)
        | LiTerm::Bracket(b, _)
        | LiTerm::Escape(b, _)
        | LiTerm::Run(b)
        | LiTerm::Open(b, _)
        | LiTerm::Close(b, _)
        | LiTerm::Csp(b) => 1 + size_li(b),
        LiTerm::App(f, a) => 1 + size_li(f) + size_li(a),
    }
}

struct LiGen<'a, R> {
    rng: &'a mut R,
    holes: LiContext,
    scope: Vec<(Symbol, LiType, Transition)>,
    /// Classifiers introduced by an enclosing `close`.
    closed: Vec<Symbol>,
    names: Names,
    steps: usize,
}

impl<R: Rng> LiGen<'_, R> {
    fn ty(&mut self, depth: usize) -> LiType {
        let base = LiType::Base(sym(if self.rng.random_bool(0.5) { "int" } else { "b" }));
        if depth == 0 {
            return base;
        }
        match self.rng.random_range(0..6) {
            0 | 1 => LiType::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            2 | 3 => {
                let c = CLASSIFIERS[self.rng.random_range(0..CLASSIFIERS.len())];
                LiType::code_at(self.ty(depth - 1), c)
            }
            4 => LiType::code_closed(self.ty(depth - 1)),
            _ => base,
        }
    }

    fn hole_allowed(&self, stage: &Transition, ty: &LiType) -> bool {
        let mut names = stage.fmv();
        ty.collect_classifiers(&mut names);
        !self.closed.iter().any(|c| names.contains(c))
    }

    fn term(&mut self, stage: &Transition, ty: &LiType, size: usize) -> Option<LiTerm> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return None;
        }
        let vars: Vec<Symbol> =
            self.scope.iter().filter(|(_, t, s)| t == ty && s == stage).map(|(x, _, _)| x.clone()).collect();
        let is_int = *ty == LiType::Base(sym("int"));
        // 0 var, 1 hole, 2 lit, 3 intro, 4 app, 5 escape, 6 run, 7 open
        let mut opts: Vec<(u8, u32)> = Vec::new();
        if !vars.is_empty() {
            opts.push((0, 3));
        }
        if self.hole_allowed(stage, ty) {
            opts.push((1, if size <= 1 { 3 } else { 1 }));
        }
        if is_int {
            opts.push((2, if size <= 1 { 3 } else { 1 }));
        }
        if (size > 1 || opts.is_empty()) && !matches!(ty, LiType::Base(_)) {
            opts.push((3, 4));
        }
        if size > 2 {
            opts.push((4, 2));
            if !stage.is_empty() {
                opts.push((5, 2));
            }
            opts.push((6, 1));
            if matches!(ty, LiType::CodeAt(..)) {
                opts.push((7, 1));
            }
        }
        if opts.is_empty() {
            return None;
        }
        match pick_weighted(self.rng, &opts) {
            0 => Some(LiTerm::var(&vars[self.rng.random_range(0..vars.len())])),
            1 => {
                let h = self.names.fresh("h");
                self.holes.insert(h.clone(), (ty.clone(), stage.clone()));
                Some(LiTerm::var(&h))
            }
            2 => Some(LiTerm::Int(self.rng.random_range(0..10).into())),
            3 => match ty {
                LiType::Arrow(d, c) => {
                    let x = self.names.fresh("x");
                    self.scope.push((x.clone(), (**d).clone(), stage.clone()));
                    let body = self.term(stage, c, size.saturating_sub(1).max(1));
                    self.scope.pop();
                    Some(LiTerm::lam(&x, (**d).clone(), body?))
                }
                LiType::CodeAt(t, c) => {
                    let body = self.term(&stage.pushed(TVar::Free(c.clone())), t, size.saturating_sub(1).max(1))?;
                    Some(LiTerm::bracket(body, c))
                }
                LiType::CodeClosed(t) => {
                    let k = self.names.fresh("k");
                    self.closed.push(k.clone());
                    let body = self.term(stage, &LiType::code_at((**t).clone(), &k), size.saturating_sub(1).max(1));
                    self.closed.pop();
                    Some(LiTerm::close(body?, &k))
                }
                LiType::Base(_) => None,
            },
            4 => {
                let d = self.rng.random_range(0..2);
                let arg = self.ty(d);
                let (l, r) = split(self.rng, size.saturating_sub(1).max(1));
                let f = self.term(stage, &LiType::arrow(arg.clone(), ty.clone()), l)?;
                let a = self.term(stage, &arg, r)?;
                Some(LiTerm::app(f, a))
            }
            5 => {
                let (outer, last) = stage.split_last()?;
                let c = last.name()?.clone();
                let m = self.term(&outer, &LiType::code_at(ty.clone(), &c), size.saturating_sub(1).max(1))?;
                Some(LiTerm::escape(m, &c))
            }
            6 => {
                Some(LiTerm::run(self.term(stage, &LiType::code_closed(ty.clone()), size.saturating_sub(1).max(1))?))
            }
            _ => match ty {
                LiType::CodeAt(t, c) => {
                    let m = self.term(stage, &LiType::CodeClosed(t.clone()), size.saturating_sub(1).max(1))?;
                    Some(LiTerm::open(m, c))
                }
                _ => None,
            },
        }
    }
}
