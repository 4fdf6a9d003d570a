//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p stagecraft --test acceptance -- --nocapture` to
//! see the report.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use stagecraft::formats::parse_proposition;
use stagecraft::harness::{on_big_stack, run_suite, SuiteReport};
use stagecraft::input::{self, examples};
use stagecraft::proofs::curated;
use stagecraft::syntax::{convert, node_to_string, parse_type};
use stagecraft_core::eval::{eval, eval_staged, EvalResult, StagedResult};
use stagecraft_core::logic::{
    random_model, satisfies, transition_monoid, ClassicalMode, Derivation, KripkeModel, ModelMode, Rule,
};
use stagecraft_core::staged::{erase, erased_eval, staged_typecheck, ErasedResult, ErasedTerm, StagedTerm};
use stagecraft_core::syntax::{TVar, Transition, Type};
use stagecraft_core::typing::typecheck;

const SEED: u64 = 0x5eed;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail: summary }
    } else {
        Outcome { ok: false, detail: format!("{summary}; {}", failures.join("; ")) }
    }
}

fn eps() -> Transition {
    Transition::epsilon()
}

/// `x * (x * ... (x * 1))` with `n` factors of `x`, written out by hand.
fn unfolded_power(n: u32) -> String {
    let mut s = String::from("1");
    for _ in 0..n {
        s = if s == "1" { "x * 1".to_string() } else { format!("x * ({s})") };
    }
    s
}

fn integer_power(x: i64, n: u32) -> i64 {
    (0..n).fold(1, |acc, _| acc * x)
}

fn power_corpus() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let stated = [
        (examples::POWER0, "int -> int -> int"),
        (examples::POWER1, "int -> <a>int -> <a>int"),
        (examples::POWER_ALPHA, "int -> <a>(int -> int)"),
        (examples::POWER2, "forall b. int -> <b>int -> <b>int"),
        (examples::POWER_FORALL, "int -> forall c. <c>(int -> int)"),
    ];
    for (src, expected) in stated {
        let (ctx, m) = input::plain(src).unwrap();
        let want = convert::to_type(&parse_type(expected).unwrap(), Default::default()).unwrap();
        match typecheck(&ctx, &eps(), &m) {
            Ok(t) if t == want => {}
            other => failures.push(format!("expected {expected}, got {other:?}")),
        }
    }
    let (ctx, delta, m) = input::staged(examples::POWER_FORALL).unwrap();
    if staged_typecheck(&ctx, &delta, &eps(), &m).is_err() {
        failures.push("power_forall is not staged-typable".into());
    }

    let code = format!("next[a] (\\x:int. {})", unfolded_power(3));
    let (_, m) = input::plain(examples::POWER_ALPHA3).unwrap();
    match eval(&eps(), &m, 100_000) {
        EvalResult::Value(v) if node_to_string(&convert::from_term(&v)) == code => {}
        other => failures.push(format!("power_alpha 3: {other:?}")),
    }

    let eight = integer_power(2, 3);
    let (_, _, m) = input::staged(examples::POWER_FORALL_RUN).unwrap();
    match eval_staged(&eps(), &m, 100_000) {
        StagedResult::Value(StagedTerm::Int(n)) if n == eight.into() => {}
        other => failures.push(format!("(power_forall 3 @[]) 2: {other:?}")),
    }
    match erased_eval(0, &erase(&m), 100_000) {
        ErasedResult::Value(ErasedTerm::Int(n)) if n == eight.into() => {}
        other => failures.push(format!("erased run: {other:?}")),
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(failures, format!("5 types, code value `{code}`, run = {eight} in {:.3}s", elapsed.as_secs_f64()))
}

fn discriminator() -> Outcome {
    let mut failures = Vec::new();
    let (_, _, m1) = input::staged(examples::DISCRIMINATOR_TERMINATES).unwrap();
    let (_, _, m2) = input::staged(examples::DISCRIMINATOR_DIVERGES).unwrap();
    match eval_staged(&eps(), &m1, 10_000) {
        StagedResult::Value(StagedTerm::Int(n)) if n == 1.into() => {}
        other => failures.push(format!("eval M1: {other:?}")),
    }
    match erased_eval(0, &erase(&m1), 10_000) {
        ErasedResult::Value(ErasedTerm::Int(n)) if n == 1.into() => {}
        other => failures.push(format!("erased_eval M1: {other:?}")),
    }
    match eval_staged(&eps(), &m2, 100_000) {
        StagedResult::FuelExhausted => {}
        other => failures.push(format!("eval M2: {other:?}")),
    }
    outcome(failures, "M1 = 1 staged and erased, M2 exhausts 10^5 fuel".into())
}

/// Requires a clean suite run with at least `min` cases.
fn suite(name: &str, min: usize, limit: Option<Duration>) -> (Outcome, SuiteReport) {
    let r = run_suite(name, SEED, None).unwrap();
    let mut failures: Vec<String> = r.messages.clone();
    if r.violations > 0 {
        failures.insert(0, format!("{} violations", r.violations));
    }
    if r.cases < min {
        failures.push(format!("only {} cases", r.cases));
    }
    if let Some(limit) = limit {
        if r.elapsed >= limit {
            failures.push(format!("took {:?}", r.elapsed));
        }
    }
    let summary = format!("{} cases, {} checks, {:.2}s", r.cases, r.checks, r.elapsed.as_secs_f64());
    (outcome(failures, summary), r)
}

fn rules(d: &Derivation, out: &mut Vec<Rule>) {
    out.push(d.rule.clone());
    for p in &d.premises {
        rules(p, out);
    }
}

/// State maps induced by every label sequence up to the length after which
/// no new map can appear.
fn sequence_maps(m: &KripkeModel) -> BTreeSet<Vec<Option<usize>>> {
    let bound = (m.states + 1).pow(m.states as u32);
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=bound {
        let mut next = Vec::new();
        for seq in &frontier {
            let map: Vec<Option<usize>> =
                (0..m.states).map(|s| seq.iter().try_fold(s, |cur, &l| m.transitions[l][cur])).collect();
            out.insert(map);
            for l in 0..m.labels.len() {
                let mut longer = seq.clone();
                longer.push(l);
                next.push(longer);
            }
        }
        frontier = next;
        if frontier.first().is_some_and(|s| s.len() > bound) {
            break;
        }
    }
    out
}

/// Satisfaction with quantifiers ranging over `maps`.
fn oracle_sat(
    m: &KripkeModel,
    maps: &[Vec<Option<usize>>],
    bound: &mut Vec<Vec<Option<usize>>>,
    s: usize,
    phi: &Type,
) -> bool {
    match phi {
        Type::Base(p) => m.valuation.get(p).is_some_and(|set| set.contains(&s)),
        Type::Int | Type::Bool => false,
        Type::Bottom => false,
        Type::Arrow(a, b) => !oracle_sat(m, maps, bound, s, a) || oracle_sat(m, maps, bound, s, b),
        Type::Code(v, body) => {
            let target = match v {
                TVar::Free(name) => {
                    let l = m.labels.iter().position(|x| x == name).expect("formula mentions only labels");
                    m.transitions[l][s]
                }
                TVar::Bound(i) => bound[bound.len() - 1 - *i as usize][s],
            };
            match target {
                Some(t) => oracle_sat(m, maps, bound, t, body),
                None => true,
            }
        }
        Type::Forall(_, body) => maps.iter().all(|f| {
            bound.push(f.clone());
            let r = oracle_sat(m, maps, bound, s, body);
            bound.pop();
            r
        }),
    }
}

fn logic() -> Outcome {
    let (mut out, _) = suite("logic", 50, None);
    let corpus = curated();
    let mut failures = Vec::new();
    if corpus.len() < 30 {
        failures.push(format!("only {} derivations", corpus.len()));
    }
    let mut used = Vec::new();
    for c in &corpus {
        rules(&c.derivation, &mut used);
    }
    let has = |f: fn(&Rule) -> bool| used.iter().any(f);
    let coverage = [
        ("code intro", has(|r| *r == Rule::CodeI)),
        ("code elim", has(|r| *r == Rule::CodeE)),
        ("forall intro", has(|r| matches!(r, Rule::ForallI { .. }))),
        ("forall elim", has(|r| matches!(r, Rule::ForallE { .. }))),
        ("bot elim", has(|r| *r == Rule::BotE)),
        ("fixed-stage bot elim", has(|r| *r == Rule::BotEAlt)),
    ];
    for (name, ok) in coverage {
        if !ok {
            failures.push(format!("no {name}"));
        }
    }
    let modes: BTreeSet<bool> = corpus.iter().map(|c| c.mode == ClassicalMode::AnyStage).collect();
    if modes.len() != 2 {
        failures.push("corpus does not exercise both classical modes".into());
    }

    let formulas = [
        "forall g. <g>p",
        "forall g. <g>p -> <g><l0>p",
        "forall g. forall h. <g><h>q -> <h>q",
        "not (forall g. not <g>r)",
        "forall g. <g>bot -> <l0>p",
        "forall g. <g><l0>p -> forall h. <h>(p -> p)",
    ];
    let formulas: Vec<Type> = formulas.iter().map(|f| parse_proposition(f).unwrap()).collect();
    let mut models = 0;
    for seed in 0..40u64 {
        for mode in [ModelMode::Total, ModelMode::Partial] {
            let model = random_model(1 + (seed % 2) as usize, 1 + (seed % 3) as usize, mode, seed);
            models += 1;
            let brute = sequence_maps(&model);
            let monoid: BTreeSet<_> = transition_monoid(&model).into_iter().collect();
            if brute != monoid {
                failures.push(format!("monoid differs from sequences for seed {seed} ({mode:?})"));
                continue;
            }
            let maps: Vec<_> = brute.into_iter().collect();
            let rho = model.label_valuation();
            for phi in formulas.iter().filter(|phi| phi.fmv().iter().all(|v| model.labels.contains(v))) {
                for s in 0..model.states {
                    let want = oracle_sat(&model, &maps, &mut Vec::new(), s, phi);
                    if satisfies(&model, &rho, s, phi) != Ok(want) {
                        failures.push(format!("quantifier mismatch on {phi:?} at state {s}, seed {seed} ({mode:?})"));
                    }
                }
            }
        }
    }
    if !failures.is_empty() {
        out.ok = false;
        out.detail = format!("{}; {}", out.detail, failures.join("; "));
    }
    out.detail =
        format!("{} derivations, {}; monoid exact on {models} models with at most 2 states", corpus.len(), out.detail);
    out
}

#[test]
fn acceptance() {
    let report = on_big_stack(|| {
        vec![
            (1, "power corpus", power_corpus()),
            (2, "erasure discriminator", discriminator()),
            (3, "subject reduction", suite("subject-reduction", 1000, Some(Duration::from_secs(30))).0),
            (4, "confluence", suite("confluence", 1000, None).0),
            (5, "strong normalization", suite("normalization", 1000, None).0),
            (6, "time-ordered normalization", suite("time-ordered", 1000, None).0),
            (7, "type soundness", suite("soundness", 1000, None).0),
            (8, "erasure property", suite("erasure", 500, None).0),
            (9, "logic soundness", logic()),
            (10, "embedding correctness", suite("embeddings", 100, None).0),
        ]
    });
    let mut failed = Vec::new();
    for (n, name, o) in &report {
        println!("{} {n:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed.push(*n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
