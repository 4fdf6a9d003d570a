//! Property suites over generated corpora, one per acceptance criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stagecraft_core::embed::{
    box_typecheck, circle_typecheck, embed_box, embed_box_context, embed_box_type, embed_circle, embed_circle_context,
    embed_circle_type, embed_lambda_i, embed_li_context, embed_li_type, forget_to_circle, li_typecheck,
};
use stagecraft_core::eval::{eval, eval_staged, is_value, EvalResult, StagedResult};
use stagecraft_core::gen::{
    random_box, random_circle, random_lambda_i, random_staged, random_term, StagedConfig, TermConfig,
};
use stagecraft_core::logic::{boxed_at, check_derivation, holds_locally, random_model, ClassicalMode, ModelMode};
use stagecraft_core::reduction::{
    complete_development, is_t_normal, natural_projection, normalize, normalize_trace, parallel_reduce_check,
    parallel_reducts, redexes, time_order, time_ordered_sequence, RedexKind,
};
use stagecraft_core::staged::{erase, erased_eval, staged_typecheck, ErasedResult, ErasedTerm};
use stagecraft_core::syntax::{Letter, Path, TVar, Term, Transition, Type};
use stagecraft_core::typing::{restrict_context, typecheck};

use crate::error::CliError;
use crate::input::{self, examples};
use crate::proofs::curated;
use crate::syntax::{convert, node_to_string, parse_type};

pub const SUITES: &[&str] = &[
    "power",
    "discriminator",
    "subject-reduction",
    "confluence",
    "normalization",
    "time-ordered",
    "soundness",
    "erasure",
    "logic",
    "embeddings",
];

/// Evaluation budget for generated programs.
pub const EVAL_FUEL: u64 = 20_000;
/// Reduction budget for generated terms.
pub const STEP_FUEL: u64 = 10_000;
/// Messages kept per report; the count covers all violations.
const KEPT: usize = 10;
/// Stack for worker threads; evaluation recursion grows with fuel.
pub const STACK: usize = 1 << 30;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: usize,
    pub checks: usize,
    pub violations: usize,
    pub messages: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {} cases, {} checks, {} violations ({:.2}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.cases,
            self.checks,
            self.violations,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Outcome of a single case.
#[derive(Default)]
struct Tally {
    checks: usize,
    violations: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

pub fn default_cases(suite: &str) -> usize {
    match suite {
        "power" | "discriminator" => 1,
        "erasure" => 500,
        "logic" => 50,
        "embeddings" => 100,
        _ => 1000,
    }
}

/// Seed of case `i`; distinct cases get unrelated streams.
pub fn case_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f` on every case, spread over worker threads. Results are merged
/// in case order, so reports do not depend on scheduling.
fn run_cases(seed: u64, cases: usize, f: impl Fn(u64) -> Tally + Sync) -> (usize, usize, Vec<String>) {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cases.max(1));
    let chunk = cases.div_ceil(workers.max(1)).max(1);
    let f = &f;
    let parts: Vec<Vec<(usize, Tally)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                std::thread::Builder::new()
                    .stack_size(STACK)
                    .spawn_scoped(s, move || {
                        (w * chunk..((w + 1) * chunk).min(cases)).map(|i| (i, f(case_seed(seed, i)))).collect()
                    })
                    .expect("worker thread")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut checks = 0;
    let mut violations = 0;
    let mut messages = Vec::new();
    for (i, t) in parts.into_iter().flatten() {
        checks += t.checks;
        violations += t.violations.len();
        for v in t.violations {
            if messages.len() < KEPT {
                messages.push(format!("case {i}: {v}"));
            }
        }
    }
    (checks, violations, messages)
}

/// Runs a closure on a thread with a large stack.
pub fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new().stack_size(STACK).spawn_scoped(s, f).expect("thread").join().expect("panicked")
    })
}

pub fn run_suite(suite: &str, seed: u64, cases: Option<usize>) -> Result<SuiteReport, CliError> {
    let Some(&name) = SUITES.iter().find(|s| **s == suite) else {
        return Err(CliError::Usage(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
    };
    let cases = match name {
        "power" | "discriminator" => 1,
        _ => cases.unwrap_or_else(|| default_cases(name)),
    };
    let start = Instant::now();
    let (checks, violations, messages) = match name {
        "power" => single(power),
        "discriminator" => single(discriminator),
        "subject-reduction" => run_cases(seed, cases, subject_reduction),
        "confluence" => run_cases(seed, cases, confluence),
        "normalization" => run_cases(seed, cases, normalization),
        "time-ordered" => run_cases(seed, cases, time_ordered),
        "soundness" => run_cases(seed, cases, soundness),
        "erasure" => run_cases(seed, cases, erasure),
        "logic" => logic(seed, cases),
        "embeddings" => run_cases(seed, cases, embeddings),
        _ => unreachable!(),
    };
    Ok(SuiteReport { suite: name, cases, checks, violations, messages, elapsed: start.elapsed() })
}

fn single(f: fn() -> Tally) -> (usize, usize, Vec<String>) {
    let t = on_big_stack(f);
    let n = t.violations.len();
    (t.checks, n, t.violations)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn eps() -> Transition {
    Transition::epsilon()
}

fn ty(src: &str) -> Type {
    convert::to_type(&parse_type(src).expect("type literal"), Default::default()).expect("type literal")
}

fn power() -> Tally {
    let mut t = Tally::default();
    let started = Instant::now();
    let stated = [
        ("power0", examples::POWER0, "int -> int -> int"),
        ("power1", examples::POWER1, "int -> <a>int -> <a>int"),
        ("power_alpha", examples::POWER_ALPHA, "int -> <a>(int -> int)"),
        ("power2", examples::POWER2, "forall b. int -> <b>int -> <b>int"),
        ("power_forall", examples::POWER_FORALL, "int -> forall c. <c>(int -> int)"),
    ];
    for (name, src, expected) in stated {
        let (ctx, m) = input::plain(src).expect("example parses");
        let got = typecheck(&ctx, &eps(), &m);
        t.check(got.as_ref().ok() == Some(&ty(expected)), || format!("{name}: {got:?}, expected {expected}"));
    }
    let (ctx, delta, m) = input::staged(examples::POWER_FORALL).expect("example parses");
    let expected =
        convert::to_staged_type(&parse_type("int -> forall c @ []. <c>(int -> int)").unwrap(), Default::default())
            .unwrap();
    let got = staged_typecheck(&ctx, &delta, &eps(), &m);
    t.check(got.as_ref().ok() == Some(&expected), || format!("power_forall (staged): {got:?}"));

    let (_, m) = input::plain(examples::POWER_ALPHA3).expect("example parses");
    let code = "next[a] (\\x:int. x * (x * (x * 1)))";
    let (_, want) = input::plain(code).unwrap();
    match eval(&eps(), &m, EVAL_FUEL) {
        EvalResult::Value(v) => {
            let shown = node_to_string(&convert::from_term(&v));
            t.check(v == want && shown == code, || format!("power_alpha 3 evaluated to {shown}"));
        }
        r => t.check(false, || format!("power_alpha 3: {r:?}")),
    }
    let (_, _, m) = input::staged(examples::POWER_FORALL_RUN).expect("example parses");
    let r = eval_staged(&eps(), &m, EVAL_FUEL);
    t.check(matches!(&r, StagedResult::Value(v) if *v == stagecraft_core::staged::StagedTerm::int(8)), || {
        format!("(power_forall 3 @[]) 2: {r:?}")
    });
    let e = erased_eval(0, &erase(&m), EVAL_FUEL);
    t.check(e == ErasedResult::Value(ErasedTerm::Int(8.into())), || format!("erased (power_forall 3 @[]) 2: {e:?}"));
    let elapsed = started.elapsed();
    t.check(elapsed < Duration::from_secs(1), || format!("power corpus took {elapsed:?}"));
    t
}

fn discriminator() -> Tally {
    let mut t = Tally::default();
    let (_, _, m1) = input::staged(examples::DISCRIMINATOR_TERMINATES).expect("example parses");
    let (_, _, m2) = input::staged(examples::DISCRIMINATOR_DIVERGES).expect("example parses");
    let r = eval_staged(&eps(), &m1, 10_000);
    t.check(matches!(&r, StagedResult::Value(v) if *v == stagecraft_core::staged::StagedTerm::int(1)), || {
        format!("terminating term: {r:?}")
    });
    let e = erased_eval(0, &erase(&m1), 10_000);
    t.check(e == ErasedResult::Value(ErasedTerm::Int(1.into())), || format!("erased terminating term: {e:?}"));
    let r = eval_staged(&eps(), &m2, 100_000);
    t.check(r == StagedResult::FuelExhausted, || format!("diverging term: {r:?}"));
    t
}

fn subject_reduction(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_term(&mut rng(seed), &TermConfig::pure());
    t.check(typecheck(&g.ctx, &eps(), &g.term).ok() == Some(g.ty.clone()), || format!("generator: {:?}", g.term));
    for s in redexes(&g.term) {
        let got = typecheck(&g.ctx, &eps(), &s.result);
        t.check(got.as_ref().ok() == Some(&g.ty), || format!("{:?} -> {:?}: {got:?}", g.term, s.result));
    }
    t
}

/// Reduces with randomly chosen redexes until a normal form.
fn random_normal_form(m: &Term, rng: &mut ChaCha8Rng) -> Option<Term> {
    let mut cur = m.clone();
    for _ in 0..STEP_FUEL {
        let mut steps = redexes(&cur);
        if steps.is_empty() {
            return Some(cur);
        }
        let i = rng.random_range(0..steps.len());
        cur = steps.swap_remove(i).result;
    }
    None
}

fn confluence(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_term(&mut rng(seed), &TermConfig::pure());
    let dev = complete_development(&g.term);
    t.check(parallel_reduce_check(&g.term, &dev), || format!("{:?} does not reach its development", g.term));
    for n in parallel_reducts(&g.term).into_iter().take(64) {
        t.check(parallel_reduce_check(&n, &dev), || format!("{n:?} does not reach {dev:?}"));
    }
    let mut r = rng(seed ^ 0x00c0_ffee);
    let a = random_normal_form(&g.term, &mut r);
    let b = random_normal_form(&g.term, &mut r);
    t.check(a.is_some() && a == b, || format!("{:?}: normal forms {a:?} and {b:?}", g.term));
    t
}

fn normalization(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_term(&mut rng(seed), &TermConfig::pure());
    let Ok((_, trace)) = normalize_trace(&g.term, STEP_FUEL) else {
        t.check(false, || format!("{:?} does not normalize", g.term));
        return t;
    };
    t.check(true, String::new);
    let Some(mut cur) = natural_projection(&g.term) else {
        t.check(false, || format!("{:?} has no projection", g.term));
        return t;
    };
    let mut beta = 0;
    let mut projected = 0;
    for s in &trace {
        let next = natural_projection(&s.result).expect("projection is total on typed terms");
        if s.kind == RedexKind::Beta {
            beta += 1;
            if next != cur {
                projected += 1;
            }
            t.check(cur.beta_reducts().contains(&next), || format!("beta step at {:?} does not project", s.position));
        } else {
            t.check(next == cur, || format!("{:?} step at {:?} changes the projection", s.kind, s.position));
        }
        cur = next;
    }
    t.check(beta == projected, || format!("{beta} beta steps project to {projected}"));
    t
}

fn candidate_paths(trace: &[Path]) -> BTreeSet<Path> {
    let mut out: BTreeSet<Path> = trace.iter().cloned().collect();
    out.insert(Path::epsilon());
    for v in ["a", "c", "d"] {
        for inverse in [false, true] {
            out.insert(Path::from_letters([Letter { var: TVar::free(v), inverse }]));
        }
    }
    out
}

fn time_ordered(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_term(&mut rng(seed), &TermConfig::pure());
    let Ok((normal, trace)) = normalize_trace(&g.term, STEP_FUEL) else {
        t.check(false, || format!("{:?} does not normalize", g.term));
        return t;
    };
    let none = BTreeSet::new();
    let paths: Vec<Path> = trace.iter().map(|s| s.path.clone()).collect();
    let candidates = candidate_paths(&paths);
    let mut terms = vec![g.term.clone()];
    terms.extend(trace.iter().map(|s| s.result.clone()));
    for m in &terms {
        let reducts: Vec<Term> = redexes(m).into_iter().map(|s| s.result).collect();
        for p in candidates.iter().filter(|p| is_t_normal(&none, p, m)) {
            for n in &reducts {
                t.check(is_t_normal(&none, p, n), || format!("{m:?} is {p:?}-normal but its reduct {n:?} is not"));
            }
        }
    }
    match time_ordered_sequence(&g.term, STEP_FUEL) {
        Ok(seq) => {
            for w in seq.windows(2) {
                t.check(time_order(&w[0].path, &w[1].path).is_le(), || {
                    format!("paths {:?} then {:?} decrease", w[0].path, w[1].path)
                });
            }
            let end = seq.last().map_or(&g.term, |s| &s.result);
            t.check(*end == normal, || format!("time-ordered normal form {end:?} differs from {normal:?}"));
            let all: Vec<&Path> = seq.iter().map(|s| &s.path).chain(&paths).collect();
            for p in &all {
                for q in &all {
                    if p.leq(q) {
                        t.check(time_order(p, q).is_le(), || format!("order contradicts {p:?} <= {q:?}"));
                    }
                }
            }
        }
        Err(_) => t.check(false, || format!("time-ordered reduction of {:?} ran out of fuel", g.term)),
    }
    t
}

fn soundness(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_term(&mut rng(seed), &TermConfig::miniml());
    t.check(g.ctx.is_epsilon_free(), || "context is not epsilon-free".into());
    match eval(&eps(), &g.term, EVAL_FUEL) {
        EvalResult::Value(v) => {
            t.check(is_value(&eps(), &v), || format!("{v:?} is not a value"));
            let got = typecheck(&g.ctx, &eps(), &v);
            t.check(got.as_ref().ok() == Some(&g.ty), || format!("value {v:?} has type {got:?}, expected {:?}", g.ty));
            if let Type::Code(a, t0) = &g.ty {
                match &v {
                    Term::Next(b, n) if a == b => {
                        let inner = restrict_context(&g.ctx, &Transition::single(a.clone()));
                        let got = typecheck(&inner, &eps(), n);
                        t.check(got.as_ref().ok() == Some(&**t0), || format!("code body {n:?} has type {got:?}"));
                    }
                    _ => t.check(false, || format!("code-typed result {v:?} is not a quotation")),
                }
            }
        }
        EvalResult::Err => t.check(false, || format!("well-typed program went wrong: {:?}", g.term)),
        EvalResult::FuelExhausted => t.check(true, String::new),
    }
    t
}

fn erasure(seed: u64) -> Tally {
    let mut t = Tally::default();
    let g = random_staged(&mut rng(seed), &StagedConfig::default());
    let got = staged_typecheck(&g.ctx, &g.delta, &eps(), &g.term);
    t.check(got.as_ref().ok() == Some(&g.ty), || format!("generator: {got:?}"));
    let staged = eval_staged(&eps(), &g.term, EVAL_FUEL);
    let erased = erased_eval(0, &erase(&g.term), EVAL_FUEL);
    match (&staged, &erased) {
        (StagedResult::Value(n), ErasedResult::Value(e)) => {
            t.check(erase(n) == *e, || format!("erasure of {n:?} is not {e:?}"))
        }
        (StagedResult::FuelExhausted, ErasedResult::FuelExhausted) => t.check(true, String::new),
        _ => t.check(false, || format!("{staged:?} vs {erased:?} for {:?}", g.term)),
    }
    t
}

fn logic(seed: u64, models: usize) -> (usize, usize, Vec<String>) {
    let corpus = curated();
    let proofs = &corpus;
    let mut checks = 0;
    let mut violations = 0;
    let mut messages = Vec::new();
    let tallies: Vec<Tally> = std::thread::scope(|s| {
        let handles: Vec<_> = proofs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                std::thread::Builder::new()
                    .stack_size(STACK)
                    .spawn_scoped(s, move || {
                        let mut t = Tally::default();
                        let j = match check_derivation(&c.derivation, c.mode) {
                            Ok(j) => j,
                            Err(e) => {
                                t.check(false, || format!("{}: {e}", c.name));
                                return t;
                            }
                        };
                        t.check(true, String::new);
                        let phi = boxed_at(&j.stage, &j.prop);
                        let mode = match c.mode {
                            ClassicalMode::AnyStage => ModelMode::Total,
                            ClassicalMode::SameStage => ModelMode::Partial,
                        };
                        for k in 0..models {
                            let ms = case_seed(seed, i * models + k);
                            let states = 1 + (ms % 4) as usize;
                            let labels = 1 + ((ms >> 8) % 3) as usize;
                            let model = random_model(states, labels, mode, ms);
                            t.check(holds_locally(&model, &j.context, &phi), || {
                                format!("{} fails in {mode:?} model with seed {ms}", c.name)
                            });
                        }
                        t
                    })
                    .expect("worker thread")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for t in tallies {
        checks += t.checks;
        violations += t.violations.len();
        messages.extend(t.violations.into_iter().take(KEPT.saturating_sub(messages.len())));
    }
    (checks, violations, messages)
}

fn embeddings(seed: u64) -> Tally {
    let mut t = Tally::default();
    let alpha = TVar::free("a");
    let c = random_circle(&mut rng(seed), 25);
    t.check(circle_typecheck(&c.ctx, 0, &c.term).as_ref() == Some(&c.ty), || format!("circle generator: {:?}", c.term));
    let image = embed_circle(&c.term, &alpha);
    let got = typecheck(&embed_circle_context(&c.ctx, &alpha), &eps(), &image);
    t.check(got.ok() == Some(embed_circle_type(&c.ty, &alpha)), || format!("circle image of {:?}", c.term));
    let source: Vec<Term> = c.term.reducts().iter().map(|n| embed_circle(n, &alpha)).collect();
    let target: Vec<Term> = redexes(&image).into_iter().map(|s| s.result).collect();
    t.check(
        source.len() == target.len()
            && source.iter().collect::<BTreeSet<_>>() == target.iter().collect::<BTreeSet<_>>(),
        || format!("one-step reducts of {:?} do not correspond", c.term),
    );
    t.check(forget_to_circle(&image).ok() == Some(c.term.clone()), || format!("forgetting the image of {:?}", c.term));

    let b = random_box(&mut rng(seed ^ 1), 25);
    t.check(box_typecheck(&b.stack, &b.term).as_ref() == Some(&b.ty), || format!("box generator: {:?}", b.term));
    let image = embed_box(&b.term, &eps());
    let ctx = embed_box_context(&b.stack, &eps());
    let ok = match (image, ctx) {
        (Ok(m), Ok(ctx)) => typecheck(&ctx, &eps(), &m).ok() == Some(embed_box_type(&b.ty)),
        _ => false,
    };
    t.check(ok, || format!("box image of {:?}", b.term));

    let l = random_lambda_i(&mut rng(seed ^ 2), 25);
    t.check(li_typecheck(&l.ctx, &eps(), &l.term).as_ref() == Some(&l.ty), || {
        format!("lambda-i generator: {:?}", l.term)
    });
    let ok = match embed_lambda_i(&l.term) {
        Ok(m) => typecheck(&embed_li_context(&l.ctx), &eps(), &m).ok() == Some(embed_li_type(&l.ty)),
        Err(_) => false,
    };
    t.check(ok, || format!("lambda-i image of {:?}", l.term));
    t
}

/// Normal form of a generated term, for callers that only need the result.
pub fn normal_form(m: &Term) -> Option<Term> {
    normalize(m, STEP_FUEL).ok()
}
