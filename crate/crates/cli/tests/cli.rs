//! The binary: example outputs and the exit-code contract.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_stagecraft");

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(BIN).args(args).current_dir(examples()).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("stagecraft-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn power_alpha_three_evaluates_to_code() {
    let r = run(&["eval", "power_alpha3.mt"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim_end(), "next[a] (\\x:int. x * (x * (x * 1)))");
}

#[test]
fn power_types() {
    let cases = [
        ("power0.mt", "int -> int -> int"),
        ("power1.mt", "int -> <a>int -> <a>int"),
        ("power_alpha.mt", "int -> <a>(int -> int)"),
        ("power2.mt", "forall b. int -> <b>int -> <b>int"),
        ("power_forall.mt", "int -> forall c. <c>(int -> int)"),
    ];
    for (file, ty) in cases {
        let r = run(&["typecheck", file]);
        assert_eq!((r.code, r.stdout.trim_end()), (0, ty), "{file}: {}", r.stderr);
    }
    let r = run(&["typecheck", "--staged", "power_forall.mt"]);
    assert_eq!(r.stdout.trim_end(), "int -> forall c. <c>(int -> int)");
}

#[test]
fn running_generated_code() {
    assert_eq!(run(&["eval", "power_forall_run.mt"]).stdout.trim_end(), "8");
    let erased = run(&["erase", "power_forall_run.mt"]);
    assert_eq!(erased.code, 0);
    let f = scratch("erased.mt", &erased.stdout);
    assert_eq!(run(&["erased-eval", &f]).stdout.trim_end(), "8");
    assert_eq!(run(&["erased-eval", "erased_example.mt"]).stdout.trim_end(), "3");
}

#[test]
fn stage_flag() {
    let f = scratch("staged_var.mt", "assume y : int @ [a b]; y + 1");
    assert_eq!(run(&["typecheck", "--stage", "a b", &f]).stdout.trim_end(), "int");
    assert_eq!(run(&["typecheck", &f]).code, 1);
    assert_eq!(run(&["eval", "--stage", "a", &f]).stdout.trim_end(), "y + 1");
    let declared = scratch("declared.mt", "declare a; declare c @ [a]; assume y : int @ [a c]; y");
    assert_eq!(run(&["typecheck", "--staged", "--stage", "a c", &declared]).stdout.trim_end(), "int");
    assert_eq!(run(&["typecheck", "--staged", "csp.mt"]).stdout.trim_end(), "<b>(int -> int)");
    assert_eq!(run(&["eval", "csp.mt"]).stdout.trim_end(), "next[b] (\\x:int. x + 1)");
}

#[test]
fn trace_paths_one_per_step() {
    let r = run(&["normalize", "--trace-paths", "trace.mt"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines, ["a", "eps", "next[a] y"]);
    let r = run(&["normalize", "trace.mt"]);
    assert_eq!(r.stdout.trim_end(), "next[a] y");
}

#[test]
fn discriminator() {
    assert_eq!(run(&["eval", "--fuel", "10000", "discriminator_terminates.mt"]).stdout.trim_end(), "1");
    let r = run(&["eval", "--fuel", "100000", "discriminator_diverges.mt"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("FuelExhausted"), "{}", r.stderr);
}

#[test]
fn embedded_images_typecheck() {
    for (from, file, ty) in [
        ("circle", "circle_example.mt", "<a>b"),
        ("box", "box_example.mt", "forall a. <a>(b -> b)"),
        ("lambda-i", "lambda_i_example.mt", "int"),
    ] {
        let r = run(&["embed", "--from", from, file]);
        assert_eq!(r.code, 0, "{from}: {}", r.stderr);
        assert!(r.stdout.ends_with(&format!("# type: {ty}\n")), "{from}: {}", r.stdout);
        let image = scratch(&format!("image-{from}.mt"), &r.stdout);
        let back = run(&["typecheck", &image]);
        assert_eq!(back.stdout.trim_end(), ty, "{from}: {}", back.stderr);
    }
}

#[test]
fn classical_modes() {
    let r = run(&["proof", "check", "falsity_transfer.prf"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim_end(), "ok: |- [] : <a>bot -> <b>bot");
    let r = run(&["proof", "check", "--mode", "same-stage", "falsity_transfer.prf"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("SideConditionFailure"), "{}", r.stderr);
    assert_eq!(run(&["proof", "check", "--mode", "same-stage", "modal_k.prf"]).code, 0);
}

#[test]
fn model_check_reports_each_state() {
    let r = run(&["model", "check", "--model", "chain.kmodel", "--formula", "later_p.prop", "--partial"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "w0: true\nw1: true\nw2: true\nholds in 3/3 states\n");
    let f = scratch("p.prop", "p");
    let r = run(&["model", "check", "--model", "chain.kmodel", "--formula", &f, "--partial"]);
    assert_eq!(r.stdout, "w0: false\nw1: true\nw2: true\nholds in 2/3 states\n");
}

#[test]
fn harness_seed_from_environment() {
    let a = Command::new(BIN)
        .args(["harness", "run", "--suite", "erasure", "--cases", "20"])
        .env("STAGECRAFT_SEED", "7")
        .output()
        .unwrap();
    let b = Command::new(BIN)
        .args(["harness", "run", "--suite", "erasure", "--cases", "20", "--seed", "7"])
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    let strip = |o: &[u8]| String::from_utf8_lossy(o).split(" (").next().unwrap().to_string();
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    let bad =
        Command::new(BIN).args(["harness", "run", "--suite", "erasure"]).env("STAGECRAFT_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

const ARROW_MISMATCH: &str = r#"(rule: ArrowI, context: [(prop: "p", at: "[]")], stage: "[]", prop: "p",
    premises: [(rule: Hyp, context: [(prop: "p", at: "[]")], stage: "[]", prop: "p")])"#;
const ARROW_NO_PREMISE: &str = r#"(rule: ArrowI, context: [], stage: "[]", prop: "p -> p", premises: [])"#;

/// Each documented error class, how to provoke it, and its exit code.
#[test]
fn exit_code_table() {
    let ill_typed = scratch("ill.mt", "prev[a] (next[a] 1)");
    let stuck = scratch("stuck.mt", "1 2");
    let loops = scratch("loop.mt", "(fix f:int -> int. f) 0");
    let bad_syntax = scratch("bad.mt", "prev[a m");
    let bad_circle = scratch("bad_circle.mt", "assume z : b @ 1; z");
    let hyp = scratch("mismatch.prf", ARROW_MISMATCH);
    let shape = scratch("shape.prf", ARROW_NO_PREMISE);
    let garbage = scratch("garbage.prf", "not a record");
    let unmapped = scratch("unmapped.prop", "<z>p");
    let table: &[(&str, Vec<&str>, i32)] = &[
        ("Usage", vec!["frobnicate"], 2),
        ("Usage", vec!["harness", "run", "--suite", "nonsense"], 2),
        ("Io", vec!["eval", "no_such_file.mt"], 2),
        ("SyntaxError", vec!["eval", &bad_syntax], 2),
        ("FormatError", vec!["proof", "check", &garbage], 2),
        ("TypeError", vec!["typecheck", &ill_typed], 1),
        ("TypeError", vec!["embed", "--from", "circle", &bad_circle], 1),
        ("EvalError", vec!["eval", &stuck], 1),
        ("FuelExhausted", vec!["eval", "--fuel", "1000", &loops], 1),
        ("RuleMismatch", vec!["proof", "check", &hyp], 1),
        ("PremiseShapeError", vec!["proof", "check", &shape], 1),
        ("SideConditionFailure", vec!["proof", "check", "--mode", "same-stage", "falsity_transfer.prf"], 1),
        ("ModelError", vec!["model", "check", "--model", "chain.kmodel", "--formula", "later_p.prop"], 1),
        ("LogicError", vec!["model", "check", "--model", "chain.kmodel", "--formula", &unmapped, "--partial"], 1),
    ];
    let mut codes: BTreeMap<&str, i32> = BTreeMap::new();
    for (class, args, code) in table {
        let r = run(args);
        assert_eq!(r.code, *code, "{class} via {args:?}: {}", r.stderr);
        if *class != "Usage" {
            assert!(r.stderr.starts_with(class), "{class} via {args:?}: {}", r.stderr);
        }
        assert_eq!(*codes.entry(class).or_insert(*code), *code, "{class} maps to two exit codes");
    }
}

#[test]
fn every_error_class_has_one_code() {
    use stagecraft::commands::typecheck_cmd;
    use stagecraft::error::CliError;
    use stagecraft_core::embed::EmbedError;
    use stagecraft_core::logic::{DerivationError, DerivationErrorKind, LogicError, ModelError};
    use stagecraft_core::syntax::{sym, Transition};
    let kinds = [
        DerivationErrorKind::RuleMismatch,
        DerivationErrorKind::SideConditionFailure,
        DerivationErrorKind::PremiseShapeError,
    ];
    let mut all = vec![
        CliError::Usage(String::new()),
        CliError::Io { path: PathBuf::new(), source: std::io::Error::other("x") },
        CliError::Syntax(stagecraft::input::plain("(").unwrap_err()),
        CliError::Format(String::new()),
        CliError::SourceType(String::new()),
        CliError::Stuck,
        CliError::FuelExhausted,
        typecheck_cmd("prev[a] (next[a] 1)", &Transition::epsilon(), false).unwrap_err(),
        typecheck_cmd("prev[a] (next[a] 1)", &Transition::epsilon(), true).unwrap_err(),
        CliError::Model(ModelError::NotTotal { label: 0 }),
        CliError::Logic(LogicError::UnboundTransitionVar(sym("z"))),
        CliError::Embed(EmbedError::StackTooShallow { needed: 1, depth: 0 }),
        CliError::Harness { suite: String::new(), violations: 1 },
    ];
    for kind in kinds {
        all.push(CliError::Derivation(DerivationError { kind, path: vec![], detail: "" }));
    }
    let mut codes: BTreeMap<&str, i32> = BTreeMap::new();
    for e in &all {
        let c = e.exit_code();
        assert!(c == 1 || c == 2);
        assert_eq!(*codes.entry(e.class()).or_insert(c), c, "{}", e.class());
    }
    let classes: Vec<&str> = codes.keys().copied().collect();
    assert_eq!(
        classes,
        [
            "EmbedError",
            "EvalError",
            "FormatError",
            "FuelExhausted",
            "Io",
            "LogicError",
            "ModelError",
            "PremiseShapeError",
            "PropertyViolation",
            "RuleMismatch",
            "SideConditionFailure",
            "SyntaxError",
            "TypeError",
            "Usage",
        ]
    );
}
