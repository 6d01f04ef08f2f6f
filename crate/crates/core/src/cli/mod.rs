//! Command-line front end: argument handling, model loading and reports.
//!
//! Exit codes: 0 when the formula holds, 1 when it fails, 2 when the verdict
//! is unknown and 3 on any error.

mod model;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checker::{CheckConfig, CheckReport, Checker, Mode};
use crate::error::{Error, Result};
use crate::formula::parse_formula;
use crate::truth::{Logic, Truth};

pub use model::Model;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ctxcheck",
    version,
    about = "Check temporal properties of reaction networks in context"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a formula against the model's initial state.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pointwise,
    Sensitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Model file.
    pub model: PathBuf,
    /// Formula text.
    #[arg(
        short = 'f',
        long,
        required_unless_present = "formula_file",
        conflicts_with = "formula_file"
    )]
    pub formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
    /// Time resolution.
    #[arg(long, default_value_t = 0.01)]
    pub rho: f64,
    /// Largest initial ball radius extrapolated by a tube.
    #[arg(long, default_value_t = 0.05)]
    pub theta: f64,
    /// Upper limit for unbounded temporal operators.
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Sensitive)]
    pub mode: ModeArg,
    /// Any unknown operand makes a connective unknown.
    #[arg(long)]
    pub paper_fidelity_kleene: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Largest internal integration step (defaults to rho).
    #[arg(long)]
    pub h_max: Option<f64>,
}

impl CheckArgs {
    pub fn config(&self) -> CheckConfig {
        CheckConfig {
            rho: self.rho,
            theta: self.theta,
            horizon: self.horizon,
            mode: match self.mode {
                ModeArg::Pointwise => Mode::Pointwise,
                ModeArg::Sensitive => Mode::Sensitive,
            },
            logic: if self.paper_fidelity_kleene {
                Logic::Strict
            } else {
                Logic::Kleene
            },
            h_max: self.h_max,
        }
    }
}

/// Loads the model and formula and runs the check.
pub fn run_check(args: &CheckArgs) -> Result<CheckReport> {
    let model = Model::load(&args.model)?;
    let text = match (&args.formula, &args.formula_file) {
        (Some(f), _) => f.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?,
        (None, None) => return Err(Error::Config("no formula given".into())),
    };
    let phi = parse_formula(text.trim(), &model.env(), Some(args.horizon))?;
    Checker::new(args.config())?.check(&model.init, &phi)
}

pub fn exit_code(verdict: Truth) -> i32 {
    match verdict {
        Truth::True => EXIT_TRUE,
        Truth::False => EXIT_FALSE,
        Truth::Unknown => EXIT_UNKNOWN,
    }
}

#[derive(Debug, Serialize)]
struct JsonPiece {
    from: f64,
    to: f64,
    value: String,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    verdict: &'static str,
    signal: Vec<JsonPiece>,
    solver_calls: u64,
    tube_calls: u64,
    wall_ms: u64,
}

pub fn render_report(report: &CheckReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!(
            "verdict: {}\nsignal: {}\nsolver_calls: {}\ntube_calls: {}\nwall_ms: {}\n",
            report.verdict, report.signal, report.solver_calls, report.tube_calls, report.wall_ms
        ),
        OutputFormat::Json => {
            let json = JsonReport {
                verdict: match report.verdict {
                    Truth::True => "true",
                    Truth::False => "false",
                    Truth::Unknown => "unknown",
                },
                signal: report
                    .signal
                    .pieces()
                    .iter()
                    .map(|p| JsonPiece {
                        from: p.from,
                        to: p.to,
                        value: p.value.code().to_string(),
                    })
                    .collect(),
                solver_calls: report.solver_calls,
                tube_calls: report.tube_calls,
                wall_ms: report.wall_ms,
            };
            serde_json::to_string(&json).expect("report serializes") + "\n"
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code together with what goes to stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (EXIT_ERROR, String::new(), text)
            } else {
                (EXIT_TRUE, text, String::new())
            };
        }
    };
    match cli.command {
        Command::Check(args) => match run_check(&args) {
            Ok(report) => (
                exit_code(report.verdict),
                render_report(&report, args.output),
                String::new(),
            ),
            Err(e) => (EXIT_ERROR, String::new(), format!("error: {e}\n")),
        },
    }
}
