use clap::Subcommand;
use schemespinlab::tlbraid::{
    braid_representation, commuting_square_check, enumerate_diagrams, jones_index_values, markov_trace,
    tl_generators, verify_tl_relations, TLElement,
};
use serde_json::json;

use super::{exact, to_value, usage};
use crate::input::{parse_scalar, read_json, read_matrix};
use crate::{CmdResult, Ctx};

#[derive(Subcommand)]
pub enum TlCmd {
    /// Check the Temperley-Lieb relations on n strands for loop value δ.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: String,
    },
    /// Check the braid relations of g_i = A·1 + A⁻¹e_i.
    Braid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
    },
    /// Markov trace of an element, or of the generator e_i.
    Trace {
        /// TL element JSON.
        #[arg(long = "in", conflicts_with_all = ["n", "generator"])]
        input: Option<String>,
        #[arg(long, requires = "generator")]
        n: Option<usize>,
        /// 1-based generator index.
        #[arg(long, requires = "n")]
        generator: Option<usize>,
        #[arg(long, default_value = "2")]
        delta: String,
    },
    /// Jones index value 4cos²(π/n), and the TL dimension on n strands.
    Index {
        #[arg(long)]
        n: usize,
    },
    /// Commuting-square condition for a type-II matrix.
    Square {
        #[arg(long = "in")]
        input: String,
    },
}

impl TlCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            TlCmd::Relations { .. } => "relations",
            TlCmd::Braid { .. } => "braid",
            TlCmd::Trace { .. } => "trace",
            TlCmd::Index { .. } => "index",
            TlCmd::Square { .. } => "square",
        }
    }
}

pub fn run(ctx: &mut Ctx, c: &TlCmd) -> CmdResult {
    match c {
        TlCmd::Relations { n, delta } => {
            ctx.input("n", *n);
            ctx.input("delta", delta.as_str());
            let d = parse_scalar(ctx, delta)?;
            let r = verify_tl_relations(*n, &d)?;
            ctx.residual("idempotent", r.idempotent);
            ctx.residual("self_adjoint", r.self_adjoint);
            ctx.residual("adjacent", r.adjacent);
            ctx.residual("distant", r.distant);
            ctx.set_pass(r.max_residual() <= ctx.tol_for(r.exact));
            ctx.result(to_value(&r));
            ctx.result(json!({"dimension": enumerate_diagrams(*n).len()}));
        }
        TlCmd::Braid { n, a } => {
            ctx.input("n", *n);
            ctx.input("a", a.as_str());
            let av = parse_scalar(ctx, a)?;
            let b = braid_representation(*n, &av)?;
            ctx.residual("braid", b.report.braid);
            ctx.residual("distant", b.report.distant);
            ctx.residual("inverse", b.report.inverse);
            ctx.set_pass(b.report.max_residual() <= ctx.tol_for(b.report.exact));
            ctx.result(to_value(&b.report));
        }
        TlCmd::Trace { input, n, generator, delta } => {
            let x = match (input, n, generator) {
                (Some(path), None, None) => {
                    ctx.input("in", path.as_str());
                    TLElement::from_json(&read_json(ctx, path)?)?
                }
                (None, Some(n), Some(i)) => {
                    ctx.input("n", *n);
                    ctx.input("generator", *i);
                    ctx.input("delta", delta.as_str());
                    let d = parse_scalar(ctx, delta)?;
                    let gens = tl_generators(*n, &d)?;
                    if *i == 0 || *i > gens.len() {
                        return Err(usage(format!("generator index must be in 1..={}", gens.len())));
                    }
                    gens[*i - 1].clone()
                }
                _ => return Err(usage("give --in, or --n with --generator")),
            };
            let t = markov_trace(&x)?;
            ctx.result(json!({"trace": exact(&t), "trace_text": t.to_string()}));
        }
        TlCmd::Index { n } => {
            ctx.input("n", *n);
            let v = jones_index_values(u32::try_from(*n).map_err(|_| usage("n is too large"))? as usize)?;
            ctx.result(json!({
                "index": exact(&v),
                "index_text": v.to_string(),
                "tl_dimension": if *n <= 7 { Some(enumerate_diagrams(*n).len()) } else { None },
            }));
        }
        TlCmd::Square { input } => {
            ctx.input("in", input.as_str());
            let w = read_matrix(ctx, input)?;
            let r = commuting_square_check(&w, &ctx.settings)?;
            ctx.residual("commuting_square", r.residual);
            ctx.set_pass(r.pass);
            ctx.result(to_value(&r));
        }
    }
    Ok(())
}
