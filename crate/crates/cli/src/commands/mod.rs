mod catalog;
mod ifs;
mod knot;
mod leonard;
mod scheme;
mod spin;
mod tl;

use clap::Subcommand;
use schemespinlab::exactalg::json::scalar_to_json;
use schemespinlab::{Error, Scalar};
use serde_json::Value;

use crate::{CmdResult, Ctx, Failure};

#[derive(Subcommand)]
pub enum Command {
    /// Association schemes and their parameters.
    #[command(subcommand)]
    Scheme(scheme::SchemeCmd),
    /// Type-II matrices and spin models.
    #[command(subcommand)]
    Spin(spin::SpinCmd),
    /// Interacting Fock spaces and graph stratification.
    #[command(subcommand)]
    Ifs(ifs::IfsCmd),
    /// Leonard pairs and the Krawtchouk relations.
    #[command(subcommand)]
    Leonard(leonard::LeonardCmd),
    /// Temperley-Lieb diagrams, braids and commuting squares.
    #[command(subcommand)]
    Tl(tl::TlCmd),
    /// Partition functions of signed state graphs.
    #[command(subcommand)]
    Knot(knot::KnotCmd),
    /// Built-in reference data.
    #[command(subcommand)]
    Catalog(catalog::CatalogCmd),
}

impl Command {
    pub fn name(&self) -> String {
        let (group, verb) = match self {
            Command::Scheme(c) => ("scheme", c.verb()),
            Command::Spin(c) => ("spin", c.verb()),
            Command::Ifs(c) => ("ifs", c.verb()),
            Command::Leonard(c) => ("leonard", c.verb()),
            Command::Tl(c) => ("tl", c.verb()),
            Command::Knot(c) => ("knot", c.verb()),
            Command::Catalog(c) => ("catalog", c.verb()),
        };
        format!("{group} {verb}")
    }
}

pub fn dispatch(ctx: &mut Ctx, c: &Command) -> CmdResult {
    match c {
        Command::Scheme(c) => scheme::run(ctx, c),
        Command::Spin(c) => spin::run(ctx, c),
        Command::Ifs(c) => ifs::run(ctx, c),
        Command::Leonard(c) => leonard::run(ctx, c),
        Command::Tl(c) => tl::run(ctx, c),
        Command::Knot(c) => knot::run(ctx, c),
        Command::Catalog(c) => catalog::run(ctx, c),
    }
}

/// Errors that are answers about valid input rather than bad input.
fn is_negative(e: &Error) -> bool {
    matches!(
        e,
        Error::Axiom { .. }
            | Error::NotAScheme(_)
            | Error::NonCommutative
            | Error::SchurSingular { .. }
            | Error::NotDistanceRegular(_)
            | Error::Admissibility(..)
            | Error::NoParameterA
            | Error::NoLoopScalar
    )
}

/// Maps a library error to exit 1 when it is a negative answer, 2 otherwise.
pub fn classify(e: Error) -> Failure {
    Failure {
        code: if is_negative(&e) { 1 } else { 2 },
        message: e.to_string(),
    }
}

pub fn negative(e: Error) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

pub fn text(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn exact(s: &Scalar) -> Value {
    scalar_to_json(s)
}

pub fn texts(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(text).collect())
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}
