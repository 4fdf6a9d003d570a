//! Conversions between the surface tree and each dialect's syntax.

use std::collections::BTreeSet;

use stagecraft_core::embed::{
    BoxStack, BoxTerm, BoxType, CircleContext, CircleTerm, CircleType, LiContext, LiTerm, LiType,
};
use stagecraft_core::staged::{ErasedTerm, StagedContext, StagedTerm, StagedType, TransitionEnv};
use stagecraft_core::syntax::{fresh, sym, Hint, Symbol, TVar, Term, Transition, Type, TypingContext, Var};

use super::lexer::{Pos, SyntaxError};
use super::surface::{At, Document, Item, Kind, Node, Prefix, SType, KEYWORDS};

type R<T> = Result<T, SyntaxError>;

fn err<T>(pos: Pos, msg: &str) -> R<T> {
    Err(SyntaxError::new(pos, msg))
}

fn stage_of(vs: &[String]) -> Transition {
    Transition(vs.iter().map(|v| TVar::free(v)).collect())
}

fn stage_names(pos: Pos, a: &Transition) -> R<Vec<String>> {
    a.vars()
        .iter()
        .map(|v| match v {
            TVar::Free(s) => Ok(s.to_string()),
            TVar::Bound(_) => err(pos, "dangling bound transition variable"),
        })
        .collect()
}

fn tvar_name(v: &TVar) -> String {
    match v {
        TVar::Free(s) => s.to_string(),
        TVar::Bound(i) => format!("?{i}"),
    }
}

fn bound_stage(a: &Transition) -> Vec<String> {
    a.vars().iter().map(tvar_name).collect()
}

/// Names to avoid when choosing binder names for printing.
fn base_avoid(names: BTreeSet<Symbol>) -> BTreeSet<Symbol> {
    let mut avoid = names;
    avoid.extend(KEYWORDS.iter().map(|k| sym(k)));
    avoid
}

// ---------------------------------------------------------------- plain

pub fn to_type(t: &SType, pos: Pos) -> R<Type> {
    Ok(match t {
        SType::Base(b) if b == "int" => Type::Int,
        SType::Base(b) if b == "bool" => Type::Bool,
        SType::Base(b) => Type::base(b),
        SType::Bot => Type::Bottom,
        SType::Arrow(a, b) => Type::arrow(to_type(a, pos)?, to_type(b, pos)?),
        SType::Code(Some(v), body) => Type::code(TVar::free(v), to_type(body, pos)?),
        SType::Forall(a, decl, body) if decl.is_empty() => Type::forall(a, to_type(body, pos)?),
        SType::Forall(..) => return err(pos, "declaration stages belong to the staged dialect"),
        SType::Code(None, _) | SType::Circ(_) | SType::Square(_) => return err(pos, "type form not in this dialect"),
    })
}

pub fn from_type(t: &Type) -> SType {
    type_with(t, &mut base_avoid(t.fmv()))
}

fn type_with(t: &Type, avoid: &mut BTreeSet<Symbol>) -> SType {
    match t {
        Type::Base(b) => SType::Base(b.to_string()),
        Type::Int => SType::Base("int".into()),
        Type::Bool => SType::Base("bool".into()),
        Type::Bottom => SType::Bot,
        Type::Arrow(a, b) => SType::Arrow(Box::new(type_with(a, avoid)), Box::new(type_with(b, avoid))),
        Type::Code(v, body) => SType::Code(Some(tvar_name(v)), Box::new(type_with(body, avoid))),
        Type::Forall(h, body) => {
            let (a, opened) = Type::unbind(h, body, avoid);
            let fresh_here = avoid.insert(a.clone());
            let out = SType::Forall(a.to_string(), Vec::new(), Box::new(type_with(&opened, avoid)));
            if fresh_here {
                avoid.remove(&a);
            }
            out
        }
    }
}

pub fn to_term(n: &Node) -> R<Term> {
    let sub = |m: &Node| to_term(m);
    Ok(match &n.kind {
        Kind::Var(x) => Term::var(x),
        Kind::Int(i) => Term::Int(i.clone()),
        Kind::Bool(b) => Term::Bool(*b),
        Kind::Lam(x, Some(t), body) => Term::lam(x, to_type(t, n.pos)?, sub(body)?),
        Kind::Fix(f, Some(t), body) => Term::fix(f, to_type(t, n.pos)?, sub(body)?),
        Kind::Lam(..) | Kind::Fix(..) => return err(n.pos, "binder needs a type annotation"),
        Kind::Gen(Some(a), decl, body) if decl.is_empty() => Term::gen(a, sub(body)?),
        Kind::Gen(Some(_), _, _) => return err(n.pos, "declaration stages belong to the staged dialect"),
        Kind::If(c, t, e) => Term::if_(sub(c)?, sub(t)?, sub(e)?),
        Kind::BinOp(op, l, r) => Term::binop(*op, sub(l)?, sub(r)?),
        Kind::App(f, a) => Term::app(sub(f)?, sub(a)?),
        Kind::Prefix(Prefix::Next(Some(v)), body) => Term::Next(TVar::free(v), Box::new(sub(body)?)),
        Kind::Prefix(Prefix::Prev(Some(v)), body) => Term::Prev(TVar::free(v), Box::new(sub(body)?)),
        Kind::TApp(m, vs) => Term::tapp(sub(m)?, stage_of(vs)),
        // Without declaration stages, single-variable instantiation is plain instantiation.
        Kind::SIns(m, v) => Term::tapp(sub(m)?, Transition::single(TVar::free(v))),
        _ => return err(n.pos, "construct not in this dialect"),
    })
}

pub fn from_term(m: &Term) -> Node {
    let mut avoid = m.names();
    avoid.extend(m.fmv());
    term_with(m, &mut base_avoid(avoid))
}

/// Runs `f` with `x` temporarily added to `avoid`.
fn scoped<T>(avoid: &mut BTreeSet<Symbol>, x: &Symbol, f: impl FnOnce(&mut BTreeSet<Symbol>) -> T) -> T {
    let added = avoid.insert(x.clone());
    let out = f(avoid);
    if added {
        avoid.remove(x);
    }
    out
}

fn term_with(m: &Term, avoid: &mut BTreeSet<Symbol>) -> Node {
    let b = |n: Node| Box::new(n);
    Node::new(match m {
        Term::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        Term::Int(i) => Kind::Int(i.clone()),
        Term::Bool(v) => Kind::Bool(*v),
        Term::Lam(h, t, body) | Term::Fix(h, t, body) => {
            let (x, opened) = Term::unbind_term(h, body, avoid);
            let ty = type_with(t, avoid);
            let inner = scoped(avoid, &x, |av| term_with(&opened, av));
            if matches!(m, Term::Lam(..)) {
                Kind::Lam(x.to_string(), Some(ty), b(inner))
            } else {
                Kind::Fix(x.to_string(), Some(ty), b(inner))
            }
        }
        Term::Gen(h, body) => {
            let (a, opened) = Term::unbind_tvar(h, body, avoid);
            let inner = scoped(avoid, &a, |av| term_with(&opened, av));
            Kind::Gen(Some(a.to_string()), Vec::new(), b(inner))
        }
        Term::If(c, t, e) => Kind::If(b(term_with(c, avoid)), b(term_with(t, avoid)), b(term_with(e, avoid))),
        Term::BinOp(op, l, r) => Kind::BinOp(*op, b(term_with(l, avoid)), b(term_with(r, avoid))),
        Term::App(f, a) => Kind::App(b(term_with(f, avoid)), b(term_with(a, avoid))),
        Term::Next(v, body) => Kind::Prefix(Prefix::Next(Some(tvar_name(v))), b(term_with(body, avoid))),
        Term::Prev(v, body) => Kind::Prefix(Prefix::Prev(Some(tvar_name(v))), b(term_with(body, avoid))),
        Term::TApp(f, a) => Kind::TApp(b(term_with(f, avoid)), bound_stage(a)),
    })
}

pub fn to_context(items: &[Item]) -> R<TypingContext> {
    let mut ctx = TypingContext::new();
    for item in items {
        match item {
            Item::Assume { pos, name, ty, at } => {
                let stage = match at {
                    None => Transition::epsilon(),
                    Some(At::Stage(vs)) => stage_of(vs),
                    Some(At::Level(_)) => return err(*pos, "expected a stage `[...]`"),
                };
                ctx.insert(sym(name), to_type(ty, *pos)?, stage);
            }
            Item::Declare { pos, .. } => return err(*pos, "`declare` belongs to the staged dialect"),
        }
    }
    Ok(ctx)
}

pub fn from_context(ctx: &TypingContext) -> R<Vec<Item>> {
    ctx.iter()
        .map(|(x, (t, a))| {
            Ok(Item::Assume {
                pos: Pos::default(),
                name: x.to_string(),
                ty: from_type(t),
                at: Some(At::Stage(stage_names(Pos::default(), a)?)),
            })
        })
        .collect()
}

// ---------------------------------------------------------------- staged

pub fn to_staged_type(t: &SType, pos: Pos) -> R<StagedType> {
    Ok(match t {
        SType::Base(b) if b == "int" => StagedType::Int,
        SType::Base(b) if b == "bool" => StagedType::Bool,
        SType::Base(b) => StagedType::Base(sym(b)),
        SType::Bot => StagedType::Bottom,
        SType::Arrow(a, b) => StagedType::arrow(to_staged_type(a, pos)?, to_staged_type(b, pos)?),
        SType::Code(Some(v), body) => StagedType::code(TVar::free(v), to_staged_type(body, pos)?),
        SType::Forall(a, decl, body) => StagedType::forall(a, stage_of(decl), to_staged_type(body, pos)?),
        SType::Code(None, _) | SType::Circ(_) | SType::Square(_) => return err(pos, "type form not in this dialect"),
    })
}

pub fn from_staged_type(t: &StagedType) -> SType {
    staged_type_with(t, &mut base_avoid(t.fmv()))
}

fn staged_type_with(t: &StagedType, avoid: &mut BTreeSet<Symbol>) -> SType {
    match t {
        StagedType::Base(b) => SType::Base(b.to_string()),
        StagedType::Int => SType::Base("int".into()),
        StagedType::Bool => SType::Base("bool".into()),
        StagedType::Bottom => SType::Bot,
        StagedType::Arrow(a, b) => {
            SType::Arrow(Box::new(staged_type_with(a, avoid)), Box::new(staged_type_with(b, avoid)))
        }
        StagedType::Code(v, body) => SType::Code(Some(tvar_name(v)), Box::new(staged_type_with(body, avoid))),
        StagedType::Forall(h, decl, body) => {
            let (a, opened) = StagedType::unbind(h, body, avoid);
            let inner = scoped(avoid, &a, |av| staged_type_with(&opened, av));
            SType::Forall(a.to_string(), bound_stage(decl), Box::new(inner))
        }
    }
}

pub fn to_staged(n: &Node) -> R<StagedTerm> {
    let sub = |m: &Node| to_staged(m);
    let ty = |t: &SType| to_staged_type(t, n.pos);
    Ok(match &n.kind {
        Kind::Var(x) => StagedTerm::var(x),
        Kind::Int(i) => StagedTerm::Int(i.clone()),
        Kind::Bool(b) => StagedTerm::Bool(*b),
        Kind::Lam(x, Some(t), body) => StagedTerm::lam(x, ty(t)?, sub(body)?),
        Kind::Fix(f, Some(t), body) => StagedTerm::fix(f, ty(t)?, sub(body)?),
        Kind::Lam(..) | Kind::Fix(..) => return err(n.pos, "binder needs a type annotation"),
        Kind::Gen(Some(a), decl, body) => StagedTerm::gen(a, stage_of(decl), sub(body)?),
        Kind::If(c, t, e) => StagedTerm::if_(sub(c)?, sub(t)?, sub(e)?),
        Kind::BinOp(op, l, r) => StagedTerm::binop(*op, sub(l)?, sub(r)?),
        Kind::App(f, a) => StagedTerm::app(sub(f)?, sub(a)?),
        Kind::Prefix(Prefix::Next(Some(v)), body) => StagedTerm::Next(TVar::free(v), Box::new(sub(body)?)),
        Kind::Prefix(Prefix::Prev(Some(v)), body) => StagedTerm::Prev(TVar::free(v), Box::new(sub(body)?)),
        Kind::TApp(m, vs) => StagedTerm::tapp(sub(m)?, stage_of(vs)),
        Kind::SIns(m, v) => StagedTerm::sins(sub(m)?, v),
        _ => return err(n.pos, "construct not in this dialect"),
    })
}

pub fn from_staged(m: &StagedTerm) -> Node {
    staged_with(m, &mut base_avoid(m.names()))
}

fn staged_with(m: &StagedTerm, avoid: &mut BTreeSet<Symbol>) -> Node {
    let b = |n: Node| Box::new(n);
    Node::new(match m {
        StagedTerm::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        StagedTerm::Int(i) => Kind::Int(i.clone()),
        StagedTerm::Bool(v) => Kind::Bool(*v),
        StagedTerm::Lam(h, t, body) | StagedTerm::Fix(h, t, body) => {
            let (x, opened) = StagedTerm::unbind_term(h, body, avoid);
            let ty = staged_type_with(t, avoid);
            let inner = scoped(avoid, &x, |av| staged_with(&opened, av));
            if matches!(m, StagedTerm::Lam(..)) {
                Kind::Lam(x.to_string(), Some(ty), b(inner))
            } else {
                Kind::Fix(x.to_string(), Some(ty), b(inner))
            }
        }
        StagedTerm::Gen(h, decl, body) => {
            let (a, opened) = StagedTerm::unbind_tvar(h, body, avoid);
            let inner = scoped(avoid, &a, |av| staged_with(&opened, av));
            Kind::Gen(Some(a.to_string()), bound_stage(decl), b(inner))
        }
        StagedTerm::If(c, t, e) => {
            Kind::If(b(staged_with(c, avoid)), b(staged_with(t, avoid)), b(staged_with(e, avoid)))
        }
        StagedTerm::BinOp(op, l, r) => Kind::BinOp(*op, b(staged_with(l, avoid)), b(staged_with(r, avoid))),
        StagedTerm::App(f, a) => Kind::App(b(staged_with(f, avoid)), b(staged_with(a, avoid))),
        StagedTerm::Next(v, body) => Kind::Prefix(Prefix::Next(Some(tvar_name(v))), b(staged_with(body, avoid))),
        StagedTerm::Prev(v, body) => Kind::Prefix(Prefix::Prev(Some(tvar_name(v))), b(staged_with(body, avoid))),
        StagedTerm::TApp(f, a) => Kind::TApp(b(staged_with(f, avoid)), bound_stage(a)),
        StagedTerm::SIns(f, v) => Kind::SIns(b(staged_with(f, avoid)), tvar_name(v)),
    })
}

pub fn to_staged_env(items: &[Item]) -> R<(StagedContext, TransitionEnv)> {
    let mut ctx = StagedContext::new();
    let mut delta = TransitionEnv::new();
    for item in items {
        match item {
            Item::Assume { pos, name, ty, at } => {
                let stage = match at {
                    None => Transition::epsilon(),
                    Some(At::Stage(vs)) => stage_of(vs),
                    Some(At::Level(_)) => return err(*pos, "expected a stage `[...]`"),
                };
                ctx.insert(sym(name), (to_staged_type(ty, *pos)?, stage));
            }
            Item::Declare { name, stage, .. } => {
                delta.insert(sym(name), stage_of(stage));
            }
        }
    }
    Ok((ctx, delta))
}

pub fn from_staged_env(ctx: &StagedContext, delta: &TransitionEnv) -> Vec<Item> {
    let mut items: Vec<Item> = delta
        .iter()
        .map(|(a, s)| Item::Declare { pos: Pos::default(), name: a.to_string(), stage: bound_stage(s) })
        .collect();
    items.extend(ctx.iter().map(|(x, (t, a))| Item::Assume {
        pos: Pos::default(),
        name: x.to_string(),
        ty: from_staged_type(t),
        at: Some(At::Stage(bound_stage(a))),
    }));
    items
}

// ---------------------------------------------------------------- erased

pub fn to_erased(n: &Node) -> R<ErasedTerm> {
    let sub = |m: &Node| to_erased(m).map(Box::new);
    Ok(match &n.kind {
        Kind::Var(x) => ErasedTerm::Var(Var::Free(sym(x))),
        Kind::Int(i) => ErasedTerm::Int(i.clone()),
        Kind::Bool(b) => ErasedTerm::Bool(*b),
        Kind::Lam(x, None, body) => ErasedTerm::Lam(Hint::new(x), Box::new(to_erased(body)?.close_term(&sym(x)))),
        Kind::Fix(f, None, body) => ErasedTerm::Fix(Hint::new(f), Box::new(to_erased(body)?.close_term(&sym(f)))),
        Kind::Lam(..) | Kind::Fix(..) => return err(n.pos, "erased binders carry no type"),
        Kind::Gen(None, _, body) => ErasedTerm::Gen(sub(body)?),
        Kind::If(c, t, e) => ErasedTerm::If(sub(c)?, sub(t)?, sub(e)?),
        Kind::BinOp(op, l, r) => ErasedTerm::BinOp(*op, sub(l)?, sub(r)?),
        Kind::App(f, a) => ErasedTerm::App(sub(f)?, sub(a)?),
        Kind::Prefix(Prefix::Next(None), body) => ErasedTerm::Next(sub(body)?),
        Kind::Prefix(Prefix::Prev(None), body) => ErasedTerm::Prev(sub(body)?),
        Kind::UnitApp(m) => ErasedTerm::UnitApp(sub(m)?),
        Kind::NatApp(m, k) => ErasedTerm::NatApp(sub(m)?, *k),
        _ => return err(n.pos, "construct not in the erased dialect"),
    })
}

pub fn from_erased(m: &ErasedTerm) -> Node {
    let mut names = BTreeSet::new();
    m.collect_free_vars(&mut names);
    erased_with(m, &mut base_avoid(names))
}

fn erased_with(m: &ErasedTerm, avoid: &mut BTreeSet<Symbol>) -> Node {
    let b = |n: Node| Box::new(n);
    Node::new(match m {
        ErasedTerm::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        ErasedTerm::Int(i) => Kind::Int(i.clone()),
        ErasedTerm::Bool(v) => Kind::Bool(*v),
        ErasedTerm::Lam(h, body) | ErasedTerm::Fix(h, body) => {
            let x = fresh(h.as_str(), avoid);
            let opened = body.open_term(&ErasedTerm::Var(Var::Free(x.clone())));
            let inner = scoped(avoid, &x, |av| erased_with(&opened, av));
            if matches!(m, ErasedTerm::Lam(..)) {
                Kind::Lam(x.to_string(), None, b(inner))
            } else {
                Kind::Fix(x.to_string(), None, b(inner))
            }
        }
        ErasedTerm::Gen(body) => Kind::Gen(None, Vec::new(), b(erased_with(body, avoid))),
        ErasedTerm::If(c, t, e) => {
            Kind::If(b(erased_with(c, avoid)), b(erased_with(t, avoid)), b(erased_with(e, avoid)))
        }
        ErasedTerm::BinOp(op, l, r) => Kind::BinOp(*op, b(erased_with(l, avoid)), b(erased_with(r, avoid))),
        ErasedTerm::App(f, a) => Kind::App(b(erased_with(f, avoid)), b(erased_with(a, avoid))),
        ErasedTerm::Next(body) => Kind::Prefix(Prefix::Next(None), b(erased_with(body, avoid))),
        ErasedTerm::Prev(body) => Kind::Prefix(Prefix::Prev(None), b(erased_with(body, avoid))),
        ErasedTerm::UnitApp(f) => Kind::UnitApp(b(erased_with(f, avoid))),
        ErasedTerm::NatApp(f, k) => Kind::NatApp(b(erased_with(f, avoid)), *k),
    })
}

// ---------------------------------------------------------------- circle

pub fn to_circle_type(t: &SType, pos: Pos) -> R<CircleType> {
    Ok(match t {
        SType::Base(b) => CircleType::Base(sym(b)),
        SType::Arrow(a, b) => CircleType::arrow(to_circle_type(a, pos)?, to_circle_type(b, pos)?),
        SType::Circ(a) => CircleType::circle(to_circle_type(a, pos)?),
        _ => return err(pos, "type form not in the circle dialect"),
    })
}

pub fn from_circle_type(t: &CircleType) -> SType {
    match t {
        CircleType::Base(b) => SType::Base(b.to_string()),
        CircleType::Arrow(a, b) => SType::Arrow(Box::new(from_circle_type(a)), Box::new(from_circle_type(b))),
        CircleType::Circle(a) => SType::Circ(Box::new(from_circle_type(a))),
    }
}

pub fn to_circle(n: &Node) -> R<CircleTerm> {
    Ok(match &n.kind {
        Kind::Var(x) => CircleTerm::var(x),
        Kind::Lam(x, Some(t), body) => CircleTerm::lam(x, to_circle_type(t, n.pos)?, to_circle(body)?),
        Kind::App(f, a) => CircleTerm::app(to_circle(f)?, to_circle(a)?),
        Kind::Prefix(Prefix::Next(None), body) => CircleTerm::next(to_circle(body)?),
        Kind::Prefix(Prefix::Prev(None), body) => CircleTerm::prev(to_circle(body)?),
        _ => return err(n.pos, "construct not in the circle dialect"),
    })
}

pub fn from_circle(m: &CircleTerm) -> Node {
    circle_with(m, &mut base_avoid(m.free_vars()))
}

fn circle_with(m: &CircleTerm, avoid: &mut BTreeSet<Symbol>) -> Node {
    Node::new(match m {
        CircleTerm::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        CircleTerm::Lam(h, t, body) => {
            let x = fresh(h.as_str(), avoid);
            let opened = body.open_term(&CircleTerm::Var(Var::Free(x.clone())));
            let inner = scoped(avoid, &x, |av| circle_with(&opened, av));
            Kind::Lam(x.to_string(), Some(from_circle_type(t)), Box::new(inner))
        }
        CircleTerm::App(f, a) => Kind::App(Box::new(circle_with(f, avoid)), Box::new(circle_with(a, avoid))),
        CircleTerm::Next(b) => Kind::Prefix(Prefix::Next(None), Box::new(circle_with(b, avoid))),
        CircleTerm::Prev(b) => Kind::Prefix(Prefix::Prev(None), Box::new(circle_with(b, avoid))),
    })
}

pub fn to_circle_context(items: &[Item]) -> R<CircleContext> {
    let mut ctx = CircleContext::new();
    for item in items {
        match item {
            Item::Assume { pos, name, ty, at } => {
                let level = match at {
                    None => 0,
                    Some(At::Level(n)) => *n,
                    Some(At::Stage(_)) => return err(*pos, "expected a level number"),
                };
                ctx.insert(sym(name), (to_circle_type(ty, *pos)?, level));
            }
            Item::Declare { pos, .. } => return err(*pos, "`declare` belongs to the staged dialect"),
        }
    }
    Ok(ctx)
}

pub fn from_circle_context(ctx: &CircleContext) -> Vec<Item> {
    ctx.iter()
        .map(|(x, (t, n))| Item::Assume {
            pos: Pos::default(),
            name: x.to_string(),
            ty: from_circle_type(t),
            at: Some(At::Level(*n)),
        })
        .collect()
}

// ---------------------------------------------------------------- box

pub fn to_box_type(t: &SType, pos: Pos) -> R<BoxType> {
    Ok(match t {
        SType::Base(b) => BoxType::Base(sym(b)),
        SType::Arrow(a, b) => BoxType::arrow(to_box_type(a, pos)?, to_box_type(b, pos)?),
        SType::Square(a) => BoxType::square(to_box_type(a, pos)?),
        _ => return err(pos, "type form not in the box dialect"),
    })
}

pub fn from_box_type(t: &BoxType) -> SType {
    match t {
        BoxType::Base(b) => SType::Base(b.to_string()),
        BoxType::Arrow(a, b) => SType::Arrow(Box::new(from_box_type(a)), Box::new(from_box_type(b))),
        BoxType::Square(a) => SType::Square(Box::new(from_box_type(a))),
    }
}

pub fn to_box(n: &Node) -> R<BoxTerm> {
    Ok(match &n.kind {
        Kind::Var(x) => BoxTerm::var(x),
        Kind::Lam(x, Some(t), body) => BoxTerm::lam(x, to_box_type(t, n.pos)?, to_box(body)?),
        Kind::App(f, a) => BoxTerm::app(to_box(f)?, to_box(a)?),
        Kind::Prefix(Prefix::Box, body) => BoxTerm::boxed(to_box(body)?),
        Kind::Prefix(Prefix::Unbox(k), body) => BoxTerm::unbox(*k, to_box(body)?),
        _ => return err(n.pos, "construct not in the box dialect"),
    })
}

pub fn from_box(m: &BoxTerm) -> Node {
    box_with(m, &mut base_avoid(m.free_vars()))
}

fn box_with(m: &BoxTerm, avoid: &mut BTreeSet<Symbol>) -> Node {
    Node::new(match m {
        BoxTerm::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        BoxTerm::Lam(h, t, body) => {
            let x = fresh(h.as_str(), avoid);
            let opened = body.open_term(&BoxTerm::Var(Var::Free(x.clone())));
            let inner = scoped(avoid, &x, |av| box_with(&opened, av));
            Kind::Lam(x.to_string(), Some(from_box_type(t)), Box::new(inner))
        }
        BoxTerm::App(f, a) => Kind::App(Box::new(box_with(f, avoid)), Box::new(box_with(a, avoid))),
        BoxTerm::Box(b) => Kind::Prefix(Prefix::Box, Box::new(box_with(b, avoid))),
        BoxTerm::Unbox(k, b) => Kind::Prefix(Prefix::Unbox(*k), Box::new(box_with(b, avoid))),
    })
}

/// `assume x : T @ n;` puts `x` in the `n`-th context of the stack.
pub fn to_box_stack(items: &[Item]) -> R<BoxStack> {
    let mut stack: BoxStack = vec![Default::default()];
    for item in items {
        match item {
            Item::Assume { pos, name, ty, at } => {
                let level = match at {
                    None => 0,
                    Some(At::Level(n)) => *n,
                    Some(At::Stage(_)) => return err(*pos, "expected a level number"),
                };
                while stack.len() <= level {
                    stack.push(Default::default());
                }
                stack[level].insert(sym(name), to_box_type(ty, *pos)?);
            }
            Item::Declare { pos, .. } => return err(*pos, "`declare` belongs to the staged dialect"),
        }
    }
    Ok(stack)
}

pub fn from_box_stack(stack: &BoxStack) -> Vec<Item> {
    let mut items = Vec::new();
    for (level, g) in stack.iter().enumerate() {
        for (x, t) in g {
            items.push(Item::Assume {
                pos: Pos::default(),
                name: x.to_string(),
                ty: from_box_type(t),
                at: Some(At::Level(level)),
            });
        }
    }
    items
}

// ---------------------------------------------------------------- lambda-i

pub fn to_li_type(t: &SType, pos: Pos) -> R<LiType> {
    Ok(match t {
        SType::Base(b) => LiType::Base(sym(b)),
        SType::Arrow(a, b) => LiType::arrow(to_li_type(a, pos)?, to_li_type(b, pos)?),
        SType::Code(Some(c), a) => LiType::code_at(to_li_type(a, pos)?, c),
        SType::Code(None, a) => LiType::code_closed(to_li_type(a, pos)?),
        _ => return err(pos, "type form not in the lambda-i dialect"),
    })
}

pub fn from_li_type(t: &LiType) -> SType {
    match t {
        LiType::Base(b) => SType::Base(b.to_string()),
        LiType::Arrow(a, b) => SType::Arrow(Box::new(from_li_type(a)), Box::new(from_li_type(b))),
        LiType::CodeAt(a, c) => SType::Code(Some(c.to_string()), Box::new(from_li_type(a))),
        LiType::CodeClosed(a) => SType::Code(None, Box::new(from_li_type(a))),
    }
}

pub fn to_li(n: &Node) -> R<LiTerm> {
    let sub = |m: &Node| to_li(m).map(Box::new);
    let name = |v: &Option<String>| v.as_deref().map(sym);
    Ok(match &n.kind {
        Kind::Var(x) => LiTerm::var(x),
        Kind::Int(i) => LiTerm::Int(i.clone()),
        Kind::Lam(x, t, body) => {
            let t = t.as_ref().map(|t| to_li_type(t, n.pos)).transpose()?;
            LiTerm::Lam(Hint::new(x), t, Box::new(to_li(body)?.close_term(&sym(x))))
        }
        Kind::App(f, a) => LiTerm::App(sub(f)?, sub(a)?),
        Kind::Prefix(Prefix::Brk(c), body) => LiTerm::Bracket(sub(body)?, name(c)),
        Kind::Prefix(Prefix::Esc(c), body) => LiTerm::Escape(sub(body)?, name(c)),
        Kind::Prefix(Prefix::Run, body) => LiTerm::Run(sub(body)?),
        Kind::Prefix(Prefix::Open(c), body) => LiTerm::Open(sub(body)?, name(c)),
        Kind::Prefix(Prefix::Close(c), body) => LiTerm::Close(sub(body)?, name(c)),
        Kind::Prefix(Prefix::Csp, body) => LiTerm::Csp(sub(body)?),
        _ => return err(n.pos, "construct not in the lambda-i dialect"),
    })
}

pub fn from_li(m: &LiTerm) -> Node {
    li_with(m, &mut base_avoid(m.free_vars()))
}

fn li_with(m: &LiTerm, avoid: &mut BTreeSet<Symbol>) -> Node {
    let b = |n: Node| Box::new(n);
    let name = |c: &Option<Symbol>| c.as_ref().map(|c| c.to_string());
    Node::new(match m {
        LiTerm::Var(v) => Kind::Var(match v {
            Var::Free(s) => s.to_string(),
            Var::Bound(i) => format!("?{i}"),
        }),
        LiTerm::Int(i) => Kind::Int(i.clone()),
        LiTerm::Lam(h, t, body) => {
            let x = fresh(h.as_str(), avoid);
            let opened = body.open_term(&LiTerm::Var(Var::Free(x.clone())));
            let inner = scoped(avoid, &x, |av| li_with(&opened, av));
            Kind::Lam(x.to_string(), t.as_ref().map(from_li_type), b(inner))
        }
        LiTerm::App(f, a) => Kind::App(b(li_with(f, avoid)), b(li_with(a, avoid))),
        LiTerm::Bracket(m, c) => Kind::Prefix(Prefix::Brk(name(c)), b(li_with(m, avoid))),
        LiTerm::Escape(m, c) => Kind::Prefix(Prefix::Esc(name(c)), b(li_with(m, avoid))),
        LiTerm::Run(m) => Kind::Prefix(Prefix::Run, b(li_with(m, avoid))),
        LiTerm::Open(m, c) => Kind::Prefix(Prefix::Open(name(c)), b(li_with(m, avoid))),
        LiTerm::Close(m, c) => Kind::Prefix(Prefix::Close(name(c)), b(li_with(m, avoid))),
        LiTerm::Csp(m) => Kind::Prefix(Prefix::Csp, b(li_with(m, avoid))),
    })
}

pub fn to_li_context(items: &[Item]) -> R<LiContext> {
    let mut ctx = LiContext::new();
    for item in items {
        match item {
            Item::Assume { pos, name, ty, at } => {
                let stage = match at {
                    None => Transition::epsilon(),
                    Some(At::Stage(vs)) => stage_of(vs),
                    Some(At::Level(_)) => return err(*pos, "expected a stage `[...]`"),
                };
                ctx.insert(sym(name), (to_li_type(ty, *pos)?, stage));
            }
            Item::Declare { pos, .. } => return err(*pos, "`declare` belongs to the staged dialect"),
        }
    }
    Ok(ctx)
}

pub fn from_li_context(ctx: &LiContext) -> Vec<Item> {
    ctx.iter()
        .map(|(x, (t, a))| Item::Assume {
            pos: Pos::default(),
            name: x.to_string(),
            ty: from_li_type(t),
            at: Some(At::Stage(bound_stage(a))),
        })
        .collect()
}

pub fn document(items: Vec<Item>, body: Node) -> Document {
    Document { items, body }
}
