//! Precedence-aware printing of the surface tree.

use std::fmt::Write;

use num_traits::Signed;
use stagecraft_core::syntax::BinOp;

use super::surface::{At, Document, Item, Kind, Node, Prefix, SType};

const BINDER: u8 = 0;
const CMP: u8 = 1;
const ADD: u8 = 2;
const MUL: u8 = 3;
const APP: u8 = 4;
const PREFIX: u8 = 5;
const ATOM: u8 = 7;

pub fn type_to_string(t: &SType) -> String {
    let mut out = String::new();
    ty(&mut out, t, 0);
    out
}

pub fn node_to_string(n: &Node) -> String {
    let mut out = String::new();
    node(&mut out, n, BINDER);
    out
}

pub fn stage_to_string(vs: &[String]) -> String {
    format!("[{}]", vs.join(" "))
}

pub fn document_to_string(d: &Document) -> String {
    let mut out = String::new();
    for item in &d.items {
        match item {
            Item::Assume { name, ty: t, at, .. } => {
                let _ = write!(out, "assume {name} : {}", type_to_string(t));
                match at {
                    Some(At::Stage(vs)) => {
                        let _ = write!(out, " @ {}", stage_to_string(vs));
                    }
                    Some(At::Level(n)) => {
                        let _ = write!(out, " @ {n}");
                    }
                    None => {}
                }
                out.push_str(";\n");
            }
            Item::Declare { name, stage, .. } => {
                let _ = writeln!(out, "declare {name} @ {};", stage_to_string(stage));
            }
        }
    }
    out.push_str(&node_to_string(&d.body));
    out
}

fn ty_level(t: &SType) -> u8 {
    match t {
        SType::Forall(..) => 0,
        SType::Arrow(..) => 1,
        SType::Code(..) | SType::Circ(_) | SType::Square(_) => 2,
        SType::Base(_) | SType::Bot => 3,
    }
}

fn ty(out: &mut String, t: &SType, min: u8) {
    if ty_level(t) < min {
        out.push('(');
        ty(out, t, 0);
        out.push(')');
        return;
    }
    match t {
        SType::Base(b) => out.push_str(b),
        SType::Bot => out.push_str("bot"),
        SType::Arrow(a, b) => {
            ty(out, a, 2);
            out.push_str(" -> ");
            ty(out, b, 0);
        }
        SType::Code(v, body) => {
            let _ = write!(out, "<{}>", v.as_deref().unwrap_or(""));
            ty(out, body, 2);
        }
        SType::Circ(body) => {
            out.push_str("circ ");
            ty(out, body, 2);
        }
        SType::Square(body) => {
            out.push_str("box ");
            ty(out, body, 2);
        }
        SType::Forall(a, decl, body) => {
            let _ = write!(out, "forall {a}");
            if !decl.is_empty() {
                let _ = write!(out, " @ {}", stage_to_string(decl));
            }
            out.push_str(". ");
            ty(out, body, 0);
        }
    }
}

fn level(k: &Kind) -> u8 {
    match k {
        Kind::Lam(..) | Kind::Fix(..) | Kind::Gen(..) | Kind::If(..) => BINDER,
        Kind::BinOp(BinOp::Eq, ..) => CMP,
        Kind::BinOp(BinOp::Add | BinOp::Sub, ..) => ADD,
        Kind::BinOp(BinOp::Mul, ..) => MUL,
        Kind::App(..) => APP,
        Kind::Prefix(..) => PREFIX,
        Kind::TApp(..) | Kind::SIns(..) | Kind::NatApp(..) => APP,
        // `M @!` directly followed by a name would read as `M @! name`.
        Kind::UnitApp(_) => BINDER,
        Kind::Int(n) if n.is_negative() => BINDER,
        Kind::Var(_) | Kind::Int(_) | Kind::Bool(_) => ATOM,
    }
}

fn opt_var(v: &Option<String>) -> String {
    v.as_ref().map(|v| format!("[{v}]")).unwrap_or_default()
}

fn node(out: &mut String, n: &Node, min: u8) {
    if level(&n.kind) < min {
        out.push('(');
        node(out, n, BINDER);
        out.push(')');
        return;
    }
    match &n.kind {
        Kind::Var(x) => out.push_str(x),
        Kind::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Kind::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Kind::Lam(x, t, body) | Kind::Fix(x, t, body) => {
            out.push_str(if matches!(n.kind, Kind::Lam(..)) { "\\" } else { "fix " });
            out.push_str(x);
            if let Some(t) = t {
                out.push(':');
                ty(out, t, 0);
            }
            out.push_str(". ");
            node(out, body, BINDER);
        }
        Kind::Gen(a, decl, body) => {
            out.push_str("gen");
            if let Some(a) = a {
                let _ = write!(out, " {a}");
            }
            if !decl.is_empty() {
                let _ = write!(out, " @ {}", stage_to_string(decl));
            }
            out.push_str(". ");
            node(out, body, BINDER);
        }
        Kind::If(c, t, e) => {
            out.push_str("if ");
            node(out, c, BINDER);
            out.push_str(" then ");
            node(out, t, BINDER);
            out.push_str(" else ");
            node(out, e, BINDER);
        }
        Kind::BinOp(op, l, r) => {
            let (lmin, rmin) = match op {
                BinOp::Eq => (ADD, ADD),
                BinOp::Add | BinOp::Sub => (ADD, MUL),
                BinOp::Mul => (MUL, APP),
            };
            node(out, l, lmin);
            let _ = write!(out, " {} ", op.symbol());
            node(out, r, rmin);
        }
        Kind::App(f, a) => {
            node(out, f, APP);
            out.push(' ');
            node(out, a, ATOM);
        }
        Kind::Prefix(p, body) => {
            let head = match p {
                Prefix::Next(v) => format!("next{} ", opt_var(v)),
                Prefix::Prev(v) => format!("prev{} ", opt_var(v)),
                Prefix::Box => "box ".into(),
                Prefix::Unbox(k) => format!("unbox[{k}] "),
                Prefix::Brk(v) => format!("brk{} ", opt_var(v)),
                Prefix::Esc(v) => format!("esc{} ", opt_var(v)),
                Prefix::Run => "run ".into(),
                Prefix::Open(v) => format!("open{} ", opt_var(v)),
                Prefix::Close(v) => format!("close{} ", opt_var(v)),
                Prefix::Csp => "%".into(),
            };
            out.push_str(&head);
            node(out, body, PREFIX);
        }
        Kind::TApp(m, vs) => {
            node(out, m, APP);
            let _ = write!(out, " @{}", stage_to_string(vs));
        }
        Kind::SIns(m, v) => {
            node(out, m, APP);
            let _ = write!(out, " @! {v}");
        }
        Kind::NatApp(m, k) => {
            node(out, m, APP);
            let _ = write!(out, " @ {k}");
        }
        Kind::UnitApp(m) => {
            node(out, m, APP);
            out.push_str(" @!");
        }
    }
}
