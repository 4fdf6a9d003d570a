//! A small proof builder and the curated derivation corpus used by the
//! logic suite.
//!
//! A [`Sketch`] names the rule at each node and the few propositions a rule
//! cannot infer; [`build`] fills in every judgment top-down.

use stagecraft_core::logic::{ClassicalMode, Derivation, Judgment, LogicContext, Proposition, Rule};
use stagecraft_core::syntax::{sym, TVar, Transition, Type};

#[derive(Clone, Debug)]
pub enum Sketch {
    /// A hypothesis at the current stage.
    Hyp(Proposition),
    /// Discharges a hypothesis at the current stage.
    Lam(Proposition, Box<Sketch>),
    App(Box<Sketch>, Box<Sketch>),
    Next(String, Box<Sketch>),
    Prev(Box<Sketch>),
    Gen(String, Box<Sketch>),
    Inst(Box<Sketch>, Transition),
    /// Proves the proposition from falsity at the given stage.
    BotE(Proposition, Transition, Box<Sketch>),
    BotEAlt(Proposition, Box<Sketch>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("cannot build derivation: {0}")]
pub struct BuildError(&'static str);

pub fn build(ctx: &LogicContext, stage: &Transition, s: &Sketch) -> Result<Derivation, BuildError> {
    let node = |rule, prop, premises| Derivation::new(rule, Judgment::new(ctx.clone(), stage.clone(), prop), premises);
    Ok(match s {
        Sketch::Hyp(p) => node(Rule::Hyp, p.clone(), vec![]),
        Sketch::Lam(p, body) => {
            let mut inner = ctx.clone();
            inner.insert((p.clone(), stage.clone()));
            let d = build(&inner, stage, body)?;
            let prop = Type::arrow(p.clone(), d.conclusion.prop.clone());
            node(Rule::ArrowI, prop, vec![d])
        }
        Sketch::App(f, a) => {
            let df = build(ctx, stage, f)?;
            let da = build(ctx, stage, a)?;
            let Type::Arrow(_, c) = &df.conclusion.prop else {
                return Err(BuildError("applying a non-implication"));
            };
            let c = (**c).clone();
            node(Rule::ArrowE, c, vec![df, da])
        }
        Sketch::Next(a, body) => {
            let v = TVar::free(a);
            let d = build(ctx, &stage.pushed(v.clone()), body)?;
            let prop = Type::code(v, d.conclusion.prop.clone());
            node(Rule::CodeI, prop, vec![d])
        }
        Sketch::Prev(body) => {
            let (outer, _) = stage.split_last().ok_or(BuildError("unquoting at the empty stage"))?;
            let d = build(ctx, &outer, body)?;
            let Type::Code(_, p) = &d.conclusion.prop else {
                return Err(BuildError("unquoting a non-modality"));
            };
            let p = (**p).clone();
            node(Rule::CodeE, p, vec![d])
        }
        Sketch::Gen(a, body) => {
            let d = build(ctx, stage, body)?;
            let prop = Type::forall(a, d.conclusion.prop.clone());
            node(Rule::ForallI { eigen: sym(a) }, prop, vec![d])
        }
        Sketch::Inst(body, b) => {
            let d = build(ctx, stage, body)?;
            let Type::Forall(_, p) = &d.conclusion.prop else {
                return Err(BuildError("instantiating a non-universal"));
            };
            let p = p.open_tvar(b);
            node(Rule::ForallE { instance: b.clone() }, p, vec![d])
        }
        Sketch::BotE(p, at, body) => {
            let mut inner = ctx.clone();
            inner.insert((Type::not(p.clone()), stage.clone()));
            node(Rule::BotE, p.clone(), vec![build(&inner, at, body)?])
        }
        Sketch::BotEAlt(p, body) => {
            let mut inner = ctx.clone();
            inner.insert((Type::not(p.clone()), stage.clone()));
            node(Rule::BotEAlt, p.clone(), vec![build(&inner, stage, body)?])
        }
    })
}

/// A derivation together with the weakest classical mode that accepts it.
#[derive(Clone, Debug)]
pub struct CuratedProof {
    pub name: &'static str,
    pub mode: ClassicalMode,
    pub derivation: Derivation,
}

fn p() -> Type {
    Type::base("p")
}

fn q() -> Type {
    Type::base("q")
}

fn r() -> Type {
    Type::base("r")
}

fn imp(a: Type, b: Type) -> Type {
    Type::arrow(a, b)
}

fn not(a: Type) -> Type {
    Type::not(a)
}

fn cd(a: &str, t: Type) -> Type {
    Type::code(TVar::free(a), t)
}

fn all(a: &str, t: Type) -> Type {
    Type::forall(a, t)
}

fn stage(vs: &[&str]) -> Transition {
    Transition::from_names(vs)
}

fn hyp(t: Type) -> Sketch {
    Sketch::Hyp(t)
}

fn lam(t: Type, s: Sketch) -> Sketch {
    Sketch::Lam(t, Box::new(s))
}

fn app(f: Sketch, a: Sketch) -> Sketch {
    Sketch::App(Box::new(f), Box::new(a))
}

fn next(a: &str, s: Sketch) -> Sketch {
    Sketch::Next(a.into(), Box::new(s))
}

fn prev(s: Sketch) -> Sketch {
    Sketch::Prev(Box::new(s))
}

fn gen(a: &str, s: Sketch) -> Sketch {
    Sketch::Gen(a.into(), Box::new(s))
}

fn inst(s: Sketch, vs: &[&str]) -> Sketch {
    Sketch::Inst(Box::new(s), stage(vs))
}

fn bot_e(t: Type, at: &[&str], s: Sketch) -> Sketch {
    Sketch::BotE(t, stage(at), Box::new(s))
}

fn bot_alt(t: Type, s: Sketch) -> Sketch {
    Sketch::BotEAlt(t, Box::new(s))
}

type Entry = (&'static str, ClassicalMode, Vec<(Type, Transition)>, Transition, Sketch);

fn entries() -> Vec<Entry> {
    use ClassicalMode::{AnyStage as Any, SameStage as Same};
    let e = Transition::epsilon;
    let closed = |name, mode, s| (name, mode, vec![], e(), s);
    let ap = cd("a", p());
    let apq = cd("a", imp(p(), q()));
    let aqr = cd("a", imp(q(), r()));
    let all_ap = all("a", ap.clone());
    let abot = cd("a", Type::Bottom);
    vec![
        closed("identity", Same, lam(p(), hyp(p()))),
        closed("weakening", Same, lam(p(), lam(q(), hyp(p())))),
        closed(
            "distribution",
            Same,
            lam(
                imp(p(), imp(q(), r())),
                lam(
                    imp(p(), q()),
                    lam(p(), app(app(hyp(imp(p(), imp(q(), r()))), hyp(p())), app(hyp(imp(p(), q())), hyp(p())))),
                ),
            ),
        ),
        closed(
            "modal-k",
            Same,
            lam(apq.clone(), lam(ap.clone(), next("a", app(prev(hyp(apq.clone())), prev(hyp(ap.clone())))))),
        ),
        closed("necessitation", Same, next("a", lam(p(), hyp(p())))),
        closed(
            "modal-composition",
            Same,
            lam(
                apq.clone(),
                lam(
                    aqr.clone(),
                    next("a", lam(p(), app(prev(hyp(aqr.clone())), app(prev(hyp(apq.clone())), hyp(p()))))),
                ),
            ),
        ),
        closed(
            "nested-modalities",
            Same,
            lam(cd("a", cd("b", p())), next("a", next("b", prev(prev(hyp(cd("a", cd("b", p())))))))),
        ),
        closed("closed-necessitation", Same, gen("a", next("a", lam(p(), hyp(p()))))),
        closed("instance", Same, lam(all_ap.clone(), inst(hyp(all_ap.clone()), &["b"]))),
        closed("run", Same, lam(all_ap.clone(), inst(hyp(all_ap.clone()), &[]))),
        closed("sequence-instance", Same, lam(all_ap.clone(), inst(hyp(all_ap.clone()), &["b", "c"]))),
        closed("regeneralize", Same, lam(all_ap.clone(), gen("c", inst(hyp(all_ap.clone()), &["c", "c"])))),
        closed(
            "closed-modal-k",
            Same,
            lam(
                all("a", apq.clone()),
                lam(
                    all_ap.clone(),
                    gen(
                        "c",
                        next(
                            "c",
                            app(
                                prev(inst(hyp(all("a", apq.clone())), &["c"])),
                                prev(inst(hyp(all_ap.clone()), &["c"])),
                            ),
                        ),
                    ),
                ),
            ),
        ),
        closed(
            "quantifier-swap",
            Same,
            lam(
                all("a", all("c", cd("a", cd("c", p())))),
                gen("c", gen("a", inst(inst(hyp(all("a", all("c", cd("a", cd("c", p()))))), &["a"]), &["c"]))),
            ),
        ),
        ("staged-hypothesis", Same, vec![(p(), stage(&["a"]))], e(), next("a", hyp(p()))),
        (
            "later-stage-root",
            Same,
            vec![(ap.clone(), e()), (apq.clone(), e())],
            stage(&["a"]),
            app(prev(hyp(apq.clone())), prev(hyp(ap.clone()))),
        ),
        closed(
            "closed-to-open",
            Same,
            lam(
                all("a", apq.clone()),
                lam(
                    cd("b", p()),
                    next("b", app(prev(inst(hyp(all("a", apq.clone())), &["b"])), prev(hyp(cd("b", p()))))),
                ),
            ),
        ),
        closed("double-negation", Same, lam(not(not(p())), bot_e(p(), &[], app(hyp(not(not(p()))), hyp(not(p())))))),
        closed("double-negation-fixed", Same, lam(not(not(p())), bot_alt(p(), app(hyp(not(not(p()))), hyp(not(p())))))),
        closed(
            "peirce",
            Same,
            lam(
                imp(imp(p(), q()), p()),
                bot_e(
                    p(),
                    &[],
                    app(
                        hyp(not(p())),
                        app(hyp(imp(imp(p(), q()), p())), lam(p(), bot_e(q(), &[], app(hyp(not(p())), hyp(p()))))),
                    ),
                ),
            ),
        ),
        closed("ex-falso", Same, lam(not(p()), lam(p(), bot_e(q(), &[], app(hyp(not(p())), hyp(p())))))),
        closed(
            "modal-double-negation",
            Same,
            lam(
                cd("a", not(not(p()))),
                next("a", bot_e(p(), &["a"], app(prev(hyp(cd("a", not(not(p()))))), hyp(not(p()))))),
            ),
        ),
        closed(
            "modal-double-negation-fixed",
            Same,
            lam(cd("a", not(not(p()))), next("a", bot_alt(p(), app(prev(hyp(cd("a", not(not(p()))))), hyp(not(p())))))),
        ),
        closed("modal-ex-falso", Same, lam(abot.clone(), next("a", bot_e(p(), &["a"], prev(hyp(abot.clone())))))),
        closed(
            "closed-classical",
            Same,
            gen(
                "a",
                lam(
                    cd("a", not(not(p()))),
                    next("a", bot_alt(p(), app(prev(hyp(cd("a", not(not(p()))))), hyp(not(p()))))),
                ),
            ),
        ),
        closed(
            "contraposition",
            Same,
            lam(imp(p(), q()), lam(not(q()), lam(p(), app(hyp(not(q())), app(hyp(imp(p(), q())), hyp(p())))))),
        ),
        closed(
            "triple-negation",
            Same,
            lam(
                not(not(not(p()))),
                lam(p(), app(hyp(not(not(not(p())))), lam(not(p()), app(hyp(not(p())), hyp(p()))))),
            ),
        ),
        closed(
            "modal-implication",
            Same,
            lam(
                imp(ap.clone(), cd("a", q())),
                next("a", lam(p(), prev(app(hyp(imp(ap.clone(), cd("a", q()))), next("a", hyp(p())))))),
            ),
        ),
        closed(
            "falsity-is-not-later",
            Any,
            gen("a", lam(abot.clone(), bot_e(Type::Bottom, &["a"], prev(hyp(abot.clone()))))),
        ),
        closed(
            "falsity-transfer",
            Any,
            lam(abot.clone(), next("b", bot_e(Type::Bottom, &["a"], prev(hyp(abot.clone()))))),
        ),
        closed("later-falsity-explodes", Any, lam(abot.clone(), bot_e(p(), &["a"], prev(hyp(abot.clone()))))),
        closed(
            "self-duality",
            Any,
            lam(
                not(cd("a", not(p()))),
                next("a", bot_e(p(), &[], app(hyp(not(cd("a", not(p())))), next("a", hyp(not(p())))))),
            ),
        ),
        closed(
            "negation-moves-inward",
            Any,
            lam(
                not(ap.clone()),
                next("a", lam(p(), bot_e(Type::Bottom, &[], app(hyp(not(ap.clone())), next("a", hyp(p())))))),
            ),
        ),
        (
            "falsity-hypothesis",
            Any,
            vec![(abot.clone(), e())],
            e(),
            bot_e(Type::Bottom, &["a"], prev(hyp(abot.clone()))),
        ),
        closed(
            "closed-falsity-transfer",
            Any,
            gen("a", gen("b", lam(abot.clone(), next("b", bot_e(Type::Bottom, &["a"], prev(hyp(abot.clone()))))))),
        ),
    ]
}

/// The curated corpus. Every entry builds; the corpus test checks that
/// each one is accepted exactly in its recorded mode.
pub fn curated() -> Vec<CuratedProof> {
    entries()
        .into_iter()
        .map(|(name, mode, ctx, stage, sketch)| {
            let ctx: LogicContext = ctx.into_iter().collect();
            let derivation = build(&ctx, &stage, &sketch).unwrap_or_else(|e| panic!("{name}: {e}"));
            CuratedProof { name, mode, derivation }
        })
        .collect()
}
