#![allow(clippy::result_large_err)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stagecraft::commands::{self, Source, DEFAULT_FUEL};
use stagecraft::error::CliError;
use stagecraft::harness::{on_big_stack, SUITES};
use stagecraft::input;
use stagecraft_core::logic::ClassicalMode;

#[derive(Parser)]
#[command(name = "stagecraft", version, about = "Type checker, evaluator and proof tools for a staged lambda calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the type of a term.
    Typecheck {
        file: PathBuf,
        /// Stage as a whitespace-separated variable list.
        #[arg(long, default_value = "")]
        stage: String,
        /// Use the staged type system, with `declare` items.
        #[arg(long)]
        staged: bool,
    },
    /// Evaluate a term to a value.
    Eval {
        file: PathBuf,
        #[arg(long, default_value = "")]
        stage: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Reduce a term to normal form.
    Normalize {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Print the path of each contracted redex, one per line.
        #[arg(long)]
        trace_paths: bool,
    },
    /// Print the erasure of a staged term.
    Erase { file: PathBuf },
    /// Evaluate an erased term.
    ErasedEval {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Translate a term of another calculus.
    Embed {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: FromArg,
    },
    /// Derivations.
    Proof {
        #[command(subcommand)]
        command: ProofCommand,
    },
    /// Kripke models.
    Model {
        #[command(subcommand)]
        command: ModelCommand,
    },
    /// Property suites.
    Harness {
        #[command(subcommand)]
        command: HarnessCommand,
    },
}

#[derive(Subcommand)]
enum ProofCommand {
    /// Check a derivation file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::AnyStage)]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Evaluate a formula at every state of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        /// Allow partial transition maps.
        #[arg(long)]
        partial: bool,
    },
}

#[derive(Subcommand)]
enum HarnessCommand {
    /// Run a suite, or `all`.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FromArg {
    Circle,
    Box,
    LambdaI,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AnyStage,
    SameStage,
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Typecheck { file, stage, staged } => {
            commands::typecheck_cmd(&commands::read(&file)?, &input::stage(&stage)?, staged)
        }
        Command::Eval { file, stage, fuel } => {
            commands::eval_cmd(&commands::read(&file)?, &input::stage(&stage)?, fuel)
        }
        Command::Normalize { file, fuel, trace_paths } => {
            commands::normalize_cmd(&commands::read(&file)?, fuel, trace_paths)
        }
        Command::Erase { file } => commands::erase_cmd(&commands::read(&file)?),
        Command::ErasedEval { file, level, fuel } => commands::erased_eval_cmd(&commands::read(&file)?, level, fuel),
        Command::Embed { file, from } => {
            let from = match from {
                FromArg::Circle => Source::Circle,
                FromArg::Box => Source::Box,
                FromArg::LambdaI => Source::LambdaI,
            };
            commands::embed_cmd(&commands::read(&file)?, from)
        }
        Command::Proof { command: ProofCommand::Check { file, mode } } => {
            let mode = match mode {
                ModeArg::AnyStage => ClassicalMode::AnyStage,
                ModeArg::SameStage => ClassicalMode::SameStage,
            };
            commands::proof_check_cmd(&commands::read(&file)?, mode)
        }
        Command::Model { command: ModelCommand::Check { model, formula, partial } } => {
            commands::model_check_cmd(&commands::read(&model)?, &commands::read(&formula)?, partial)
        }
        Command::Harness { command: HarnessCommand::Run { suite, seed, cases } } => {
            if suite != "all" && !SUITES.contains(&suite.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown suite `{suite}`; expected all or one of {}",
                    SUITES.join(", ")
                )));
            }
            let seed = commands::seed_from_env(seed)?;
            let (text, reports) = commands::harness_cmd(&suite, seed, cases)?;
            println!("{text}");
            match reports.iter().find(|r| !r.passed()) {
                Some(r) => Err(CliError::Harness { suite: r.suite.to_string(), violations: r.violations }),
                None => Ok(String::new()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match on_big_stack(move || run(cli)) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", e.class());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
