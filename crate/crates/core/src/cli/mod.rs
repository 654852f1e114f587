//! Command-line front end.
//!
//! ```text
//! adequality solve <file> [--order N] [--style modern|herigone] [--json] [--tol x]
//! adequality check <file> [--json]
//! adequality eval <expr> [--bind name=expr]... [--order N] [--mode exact|approx]
//! ```
//!
//! Exit codes: 0 success, 1 bad input, 2 the mathematics failed (no tangent,
//! constant expression, ...), 3 a derivation did not check.

mod derivation_file;
mod problem;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::checker::{validate_derivation, DerivationReport, StepVerdict};
use crate::expr::{eval_series, parse, Binding, ExprError};
use crate::fermat::{FermatError, TraceStyle};
use crate::numfield::{Mode, DEFAULT_TRUNC};

pub use derivation_file::{DerivationFile, StepRecord};
pub use problem::{Problem, Solution, SolveOptions, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON at byte {offset} (line {line}, column {column}): {message}")]
    Json { path: PathBuf, offset: usize, line: usize, column: usize, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Math(FermatError),
}

impl From<FermatError> for CliError {
    fn from(e: FermatError) -> Self {
        match e {
            FermatError::InvalidGeometry(m) => CliError::Input(format!("invalid geometry: {m}")),
            FermatError::Expr(inner) => CliError::Expr(inner),
            other => CliError::Math(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => EXIT_MATH,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "adequality", version, about = "Infinitesimal arithmetic and checked adequality derivations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Modern,
    Herigone,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and print its derivation.
    Solve {
        file: PathBuf,
        /// Truncation order (overrides the file's `trunc`; default 8).
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, value_enum, default_value = "modern")]
        style: StyleArg,
        /// Print the result and derivation as JSON.
        #[arg(long)]
        json: bool,
        /// Refraction tolerance (overrides the file's `tol`; default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check every step of a derivation file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expression in the truncated series field.
    Eval {
        expr: String,
        /// Bind a variable, `name=expr`; later bindings may use earlier ones.
        #[arg(long = "bind", value_name = "NAME=EXPR")]
        binds: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_TRUNC)]
        order: i64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Regular output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve { file, order, style, json, tol } => {
            cmd_solve(&file, SolveOptions { order, tol }, style, json, out)
        }
        Command::Check { file, json } => cmd_check(&file, json, out),
        Command::Eval { expr, binds, order, mode } => cmd_eval(&expr, &binds, order, mode, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| json_error(path, &text, &e))
}

fn json_error(path: &Path, text: &str, e: &serde_json::Error) -> CliError {
    let (line, column) = (e.line(), e.column());
    let offset =
        text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum::<usize>() + column.saturating_sub(1);
    let message = e.to_string();
    let message = message.rsplit_once(" at line").map_or(message.as_str(), |(m, _)| m).to_string();
    CliError::Json { path: path.to_path_buf(), offset, line, column, message }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn cmd_solve(
    path: &Path,
    options: SolveOptions,
    style: StyleArg,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(n) = options.order.filter(|n| *n < 1) {
        return Err(CliError::Input(format!("--order must be positive, got {n}")));
    }
    if let Some(t) = options.tol.filter(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(CliError::Input(format!("--tol must be positive and finite, got {t}")));
    }
    let problem = Problem::from_json(read_json(path)?)?;
    let solution = problem.solve(options)?;
    if as_json {
        emit(out, &serde_json::to_string_pretty(&solution.to_json()).expect("JSON values serialize"))?;
    } else {
        let style = match style {
            StyleArg::Modern => TraceStyle::Modern,
            StyleArg::Herigone => TraceStyle::Herigone,
        };
        for line in solution.derivation.render_lines(style) {
            emit(out, &line)?;
        }
        emit(out, &format!("result: {}", solution.summary))?;
    }
    Ok(EXIT_OK)
}

fn verdict_json(index: usize, v: &StepVerdict, rule: &str) -> Value {
    match v {
        StepVerdict::Valid => json!({ "step": index, "rule": rule, "verdict": "valid" }),
        StepVerdict::Invalid { reason, counterexample } => {
            let mut doc = json!({ "step": index, "rule": rule, "verdict": "invalid", "reason": reason });
            if let Some(b) = counterexample {
                let values: serde_json::Map<String, Value> =
                    b.names().map(|n| (n.to_string(), json!(b.get(n).expect("bound").to_string()))).collect();
                doc["counterexample"] = Value::Object(values);
            }
            doc
        }
        StepVerdict::Undecidable(reason) => {
            json!({ "step": index, "rule": rule, "verdict": "undecidable", "reason": reason })
        }
    }
}

fn report_lines(report: &DerivationReport, rules: &[&str]) -> Vec<String> {
    let mut lines: Vec<String> = report
        .verdicts
        .iter()
        .zip(rules)
        .enumerate()
        .map(|(i, (v, rule))| match v {
            StepVerdict::Valid => format!("step {} [{rule}]: valid", i + 1),
            StepVerdict::Invalid { reason, counterexample } => {
                let witness = counterexample.as_ref().map_or(String::new(), |b| {
                    let values: Vec<String> =
                        b.names().map(|n| format!("{n} = {}", b.get(n).expect("bound"))).collect();
                    format!(" (counterexample: {})", values.join(", "))
                });
                format!("step {} [{rule}]: invalid: {reason}{witness}", i + 1)
            }
            StepVerdict::Undecidable(reason) => format!("step {} [{rule}]: undecidable: {reason}", i + 1),
        })
        .collect();
    lines.push(format!(
        "pattern: {}",
        if report.pattern {
            "ok"
        } else {
            "violated (expected equalities, one block of adequalities, one concluding equality)"
        }
    ));
    if !report.side_conditions.is_empty() {
        let conditions: Vec<String> = report.side_conditions.iter().map(ToString::to_string).collect();
        lines.push(format!("side conditions: {}", conditions.join(", ")));
    }
    if let Some(reason) = &report.inconsistency {
        lines.push(reason.clone());
    }
    lines.push(if report.is_valid() { "derivation: valid".into() } else { "derivation: invalid".into() });
    lines
}

fn cmd_check(path: &Path, as_json: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = read_json(path)?;
    let file: DerivationFile =
        serde_json::from_value(doc).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let derivation = file.to_derivation()?;
    let report = validate_derivation(&derivation);
    let rules: Vec<&str> = derivation.steps().iter().map(|s| s.rule.name()).collect();
    if as_json {
        let verdicts: Vec<Value> =
            report.verdicts.iter().zip(&rules).enumerate().map(|(i, (v, r))| verdict_json(i + 1, v, r)).collect();
        let conditions: Vec<String> = report.side_conditions.iter().map(ToString::to_string).collect();
        let doc = json!({
            "valid": report.is_valid(),
            "verdicts": verdicts,
            "pattern": report.pattern,
            "side_conditions": conditions,
            "inconsistency": report.inconsistency,
        });
        emit(out, &serde_json::to_string_pretty(&doc).expect("JSON values serialize"))?;
    } else {
        for line in report_lines(&report, &rules) {
            emit(out, &line)?;
        }
    }
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_eval(text: &str, binds: &[String], order: i64, mode: ModeArg, out: &mut dyn Write) -> Result<i32, CliError> {
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Approx => Mode::approx(),
    };
    let mut binding = Binding::new(mode, order)?;
    for bind in binds {
        let (name, value) =
            bind.split_once('=').ok_or_else(|| CliError::Input(format!("--bind expects name=expr, got '{bind}'")))?;
        let value = eval_series(&parse(value)?, &binding)?;
        binding.bind(name.trim(), value)?;
    }
    let series = eval_series(&parse(text)?, &binding)?;
    emit(out, &series.to_string())?;
    Ok(EXIT_OK)
}
