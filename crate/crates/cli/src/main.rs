//! `schemespinlab`: one verification or construction per invocation, JSON report on stdout.
//!
//! Exit codes: 0 the check passed, 1 the check ran and came out negative, 2 bad input or usage.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};
use schemespinlab::report::{Residual, Report};
use schemespinlab::settings::{DEFAULT_EPS, DEFAULT_SEED, DEFAULT_STATE_CAP, DEFAULT_VERTEX_CAP};
use schemespinlab::{Error, Mode, Settings};
use serde_json::Value;

use commands::Command;

#[derive(Parser)]
#[command(name = "schemespinlab", version, about = "Association schemes, spin models and their algebraic checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Args)]
struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Absolute tolerance for approximate comparisons.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = DEFAULT_EPS)]
    tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest state space a partition function may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    cap: u128,
    /// Largest vertex set a construction may build.
    #[arg(long = "vertex-cap", global = true, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
}

/// Failure that ends a command early.
pub struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        commands::classify(e)
    }
}

pub type CmdResult = std::result::Result<(), Failure>;

pub struct Ctx {
    pub settings: Settings,
    report: Report,
    catalog_ids: Vec<String>,
}

impl Ctx {
    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.report.inputs.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, value: Value) {
        self.report.results.push(value);
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.report.residuals.push(Residual::new(name, value));
    }

    /// Marks the check as negative; the process exits 1.
    pub fn fail(&mut self) {
        self.report.pass = false;
    }

    pub fn set_pass(&mut self, pass: bool) {
        self.report.pass &= pass;
    }

    pub fn provenance(&mut self, key: &str, value: impl Into<Value>) {
        self.report.provenance.insert(key.to_string(), value.into());
    }

    pub fn note_catalog(&mut self, id: &str) {
        if !self.catalog_ids.iter().any(|x| x == id) {
            self.catalog_ids.push(id.to_string());
        }
    }

    /// Zero in exact mode, the tolerance otherwise.
    pub fn tol_for(&self, exact: bool) -> f64 {
        if exact {
            0.0
        } else {
            self.settings.eps
        }
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> bool {
    let text = match serde_json::to_string_pretty(report) {
        Ok(t) => t + "\n",
        Err(e) => {
            eprintln!("cannot serialise report: {e}");
            return false;
        }
    };
    match out {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                false
            }
        },
        None => {
            print!("{text}");
            true
        }
    }
}

fn usage_report(message: String) -> Report {
    let mut r = Report::new("usage", &Settings::default());
    r.pass = false;
    r.error = Some(message);
    r
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit(&usage_report(e.render().to_string()), None);
            return ExitCode::from(2);
        }
    };
    let g = &cli.global;
    let settings = Settings {
        eps: g.tol,
        seed: g.seed,
        vertex_cap: g.vertex_cap,
        state_cap: g.cap,
        mode: match g.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        },
    };
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        emit(&usage_report(format!("--tol must be positive, got {}", g.tol)), g.out.as_ref());
        return ExitCode::from(2);
    }
    let mut ctx = Ctx {
        report: Report::new(cli.command.name(), &settings),
        settings,
        catalog_ids: Vec::new(),
    };
    let outcome = commands::dispatch(&mut ctx, &cli.command);
    if !ctx.catalog_ids.is_empty() {
        let ids = ctx.catalog_ids.clone();
        ctx.provenance("catalog", ids);
    }
    let code = match outcome {
        Ok(()) if ctx.report.pass => 0,
        Ok(()) => 1,
        Err(f) => {
            ctx.report.pass = false;
            ctx.report.error = Some(f.message);
            f.code
        }
    };
    if !emit(&ctx.report, g.out.as_ref()) {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
