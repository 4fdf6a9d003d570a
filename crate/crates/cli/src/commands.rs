//! One function per subcommand. Each returns the text to print on success.

use std::path::Path as FsPath;

use stagecraft_core::embed::{
    box_typecheck, circle_typecheck, embed_box, embed_box_context, embed_box_type, embed_circle, embed_circle_context,
    embed_circle_type, embed_lambda_i, embed_li_context, embed_li_type, li_typecheck,
};
use stagecraft_core::eval::{eval_staged, StagedResult};
use stagecraft_core::logic::{check_derivation, satisfies, ClassicalMode, ModelMode};
use stagecraft_core::reduction::normalize_trace;
use stagecraft_core::staged::{erase, erased_eval, staged_typecheck, ErasedResult};
use stagecraft_core::syntax::{fresh, Path, TVar, Transition, TypingContext};
use stagecraft_core::typing::typecheck;

use crate::error::CliError;
use crate::formats::{parse_derivation, parse_model_named, parse_proposition, print_proposition, print_stage};
use crate::harness::{run_suite, SuiteReport, SUITES};
use crate::input;
use crate::syntax::{convert, document_to_string, node_to_string, type_to_string};

pub const DEFAULT_FUEL: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn read(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn typecheck_cmd(src: &str, stage: &Transition, staged: bool) -> Result<String, CliError> {
    if staged {
        let (ctx, delta, m) = input::staged(src)?;
        let t = staged_typecheck(&ctx, &delta, stage, &m)?;
        Ok(type_to_string(&convert::from_staged_type(&t)))
    } else {
        let (ctx, m) = input::plain(src)?;
        let t = typecheck(&ctx, stage, &m)?;
        Ok(type_to_string(&convert::from_type(&t)))
    }
}

/// Evaluates in the staged language, which contains the plain one.
pub fn eval_cmd(src: &str, stage: &Transition, fuel: u64) -> Result<String, CliError> {
    let (_, _, m) = input::staged(src)?;
    match eval_staged(stage, &m, fuel) {
        StagedResult::Value(v) => Ok(node_to_string(&convert::from_staged(&v))),
        StagedResult::Err => Err(CliError::Stuck),
        StagedResult::FuelExhausted => Err(CliError::FuelExhausted),
    }
}

pub fn format_path(p: &Path) -> String {
    let letters = p.letters();
    if letters.is_empty() {
        return "eps".into();
    }
    letters
        .iter()
        .map(|l| {
            let name = match &l.var {
                TVar::Free(s) => s.to_string(),
                TVar::Bound(i) => format!("?{i}"),
            };
            if l.inverse {
                format!("{name}^-1")
            } else {
                name
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn normalize_cmd(src: &str, fuel: u64, trace_paths: bool) -> Result<String, CliError> {
    let (_, m) = input::plain(src)?;
    let (n, trace) = normalize_trace(&m, fuel).map_err(|_| CliError::FuelExhausted)?;
    let mut out = String::new();
    if trace_paths {
        for s in &trace {
            out.push_str(&format_path(&s.path));
            out.push('\n');
        }
    }
    out.push_str(&node_to_string(&convert::from_term(&n)));
    Ok(out)
}

pub fn erase_cmd(src: &str) -> Result<String, CliError> {
    let (_, _, m) = input::staged(src)?;
    Ok(node_to_string(&convert::from_erased(&erase(&m))))
}

pub fn erased_eval_cmd(src: &str, level: usize, fuel: u64) -> Result<String, CliError> {
    let m = input::erased(src)?;
    match erased_eval(level, &m, fuel) {
        ErasedResult::Value(v) => Ok(node_to_string(&convert::from_erased(&v))),
        ErasedResult::Err => Err(CliError::Stuck),
        ErasedResult::FuelExhausted => Err(CliError::FuelExhausted),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Circle,
    Box,
    LambdaI,
}

/// Prints the image as a document, with its type as a trailing comment.
fn image(
    ctx: &TypingContext,
    body: &stagecraft_core::syntax::Term,
    ty: &stagecraft_core::syntax::Type,
) -> Result<String, CliError> {
    let doc = convert::document(convert::from_context(ctx)?, convert::from_term(body));
    Ok(format!("{}\n# type: {}", document_to_string(&doc).trim_end(), type_to_string(&convert::from_type(ty))))
}

pub fn embed_cmd(src: &str, from: Source) -> Result<String, CliError> {
    match from {
        Source::Circle => {
            let (ctx, m) = input::circle(src)?;
            let t =
                circle_typecheck(&ctx, 0, &m).ok_or_else(|| CliError::SourceType("ill-typed circle term".into()))?;
            let avoid = ctx.keys().cloned().collect();
            let alpha = TVar::Free(fresh("a", &avoid));
            let out_ctx = embed_circle_context(&ctx, &alpha);
            let out = embed_circle(&m, &alpha);
            let out_ty = embed_circle_type(&t, &alpha);
            debug_assert_eq!(typecheck(&out_ctx, &Transition::epsilon(), &out).ok(), Some(out_ty.clone()));
            image(&out_ctx, &out, &out_ty)
        }
        Source::Box => {
            let (stack, m) = input::boxed(src)?;
            let t = box_typecheck(&stack, &m).ok_or_else(|| CliError::SourceType("ill-typed box term".into()))?;
            let mut avoid: std::collections::BTreeSet<_> = stack.iter().flat_map(|g| g.keys().cloned()).collect();
            let mut names: Vec<TVar> = Vec::new();
            for _ in 1..stack.len() {
                let a = fresh("a", &avoid);
                avoid.insert(a.clone());
                names.push(TVar::Free(a));
            }
            let a = Transition(names);
            let out_ctx = embed_box_context(&stack, &a)?;
            let out = embed_box(&m, &a)?;
            let out_ty = embed_box_type(&t);
            let mut text = image(&out_ctx, &out, &out_ty)?;
            if !a.is_empty() {
                text.push_str(&format!("\n# stage: {}", print_stage(&a)));
            }
            Ok(text)
        }
        Source::LambdaI => {
            let (ctx, m) = input::lambda_i(src)?;
            let t = li_typecheck(&ctx, &Transition::epsilon(), &m)
                .ok_or_else(|| CliError::SourceType("ill-typed lambda-i term".into()))?;
            let out_ctx = embed_li_context(&ctx);
            let out = embed_lambda_i(&m)?;
            image(&out_ctx, &out, &embed_li_type(&t))
        }
    }
}

pub fn proof_check_cmd(src: &str, mode: ClassicalMode) -> Result<String, CliError> {
    let d = parse_derivation(src)?;
    let j = check_derivation(&d, mode)?;
    let hyps: Vec<String> =
        j.context.iter().map(|(p, a)| format!("{} @ {}", print_proposition(p), print_stage(a))).collect();
    let mut out = String::from("ok: ");
    if !hyps.is_empty() {
        out.push_str(&hyps.join(", "));
        out.push(' ');
    }
    out.push_str(&format!("|- {} : {}", print_stage(&j.stage), print_proposition(&j.prop)));
    Ok(out)
}

pub fn model_check_cmd(model_src: &str, formula_src: &str, partial: bool) -> Result<String, CliError> {
    let mode = if partial { ModelMode::Partial } else { ModelMode::Total };
    let (model, names) = parse_model_named(model_src, mode)?;
    let phi = parse_proposition(formula_src)?;
    let rho = model.label_valuation();
    let mut out = String::new();
    let mut count = 0;
    for (s, name) in names.iter().enumerate() {
        let holds = satisfies(&model, &rho, s, &phi)?;
        count += usize::from(holds);
        out.push_str(&format!("{name}: {holds}\n"));
    }
    out.push_str(&format!("holds in {count}/{} states", model.states));
    Ok(out)
}

/// Runs one suite, or every suite for `all`.
pub fn harness_cmd(suite: &str, seed: u64, cases: Option<usize>) -> Result<(String, Vec<SuiteReport>), CliError> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut out = Vec::new();
    let mut reports = Vec::new();
    for name in names {
        let r = run_suite(name, seed, cases)?;
        out.push(r.line());
        out.extend(r.messages.iter().map(|m| format!("  {m}")));
        reports.push(r);
    }
    Ok((out.join("\n"), reports))
}

pub fn seed_from_env(explicit: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("STAGECRAFT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("STAGECRAFT_SEED is not a number: `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
