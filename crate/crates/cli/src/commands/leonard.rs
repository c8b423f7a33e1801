use clap::Subcommand;
use schemespinlab::exactalg::json::mat_to_json;
use schemespinlab::ifs::{build_ifs, JacobiCoefficients};
use schemespinlab::qleonard::{
    anyon_qdata, is_leonard_pair, krawtchouk_relations, ksl2_substitution, leonard_from_qdata, KrawtchoukReport,
    Verdict,
};
use schemespinlab::{Error, Scalar};
use serde_json::json;

use super::{exact, negative, to_value};
use crate::input::{parse_scalar, read_pair};
use crate::{CmdResult, Ctx};

#[derive(Subcommand)]
pub enum LeonardCmd {
    /// Decide whether (A, B) is a Leonard pair.
    Check {
        /// JSON with matrices "a" and "b".
        #[arg(long = "in")]
        input: String,
    },
    /// Residuals of the Krawtchouk cubic relations for a pair.
    Krawtchouk {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        omega: String,
    },
    /// Krawtchouk generators built from the sl2 ladder of dimension d + 1.
    Subst {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        omega: String,
        /// Include the generator matrices in the report.
        #[arg(long)]
        emit: bool,
    },
    /// θ-sequence for SU(2) level k with q = exp(2πi/(k+2)).
    Qdata {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1")]
        epsilon: String,
        /// Also test the diagonal θ matrix against the sl2 ladder.
        #[arg(long)]
        pair: bool,
    },
}

impl LeonardCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            LeonardCmd::Check { .. } => "check",
            LeonardCmd::Krawtchouk { .. } => "krawtchouk",
            LeonardCmd::Subst { .. } => "subst",
            LeonardCmd::Qdata { .. } => "qdata",
        }
    }
}

fn krawtchouk_residuals(ctx: &mut Ctx, r: &KrawtchoukReport) {
    ctx.residual("cubic_a", r.cubic_a);
    ctx.residual("cubic_b", r.cubic_b);
    ctx.residual("presentation_ac", r.presentation_ac);
    ctx.residual("presentation_cb", r.presentation_cb);
    let tol = ctx.tol_for(r.exact);
    ctx.set_pass(r.max_residual() <= tol && r.presentations_agree);
    ctx.result(to_value(r));
}

pub fn run(ctx: &mut Ctx, c: &LeonardCmd) -> CmdResult {
    match c {
        LeonardCmd::Check { input } => {
            ctx.input("in", input.as_str());
            let pair = read_pair(ctx, input)?;
            let r = is_leonard_pair(&pair, &ctx.settings)?;
            ctx.set_pass(r.verdict == Verdict::Holds);
            ctx.result(to_value(&r));
        }
        LeonardCmd::Krawtchouk { input, omega } => {
            ctx.input("in", input.as_str());
            ctx.input("omega", omega.as_str());
            let pair = read_pair(ctx, input)?;
            let w = parse_scalar(ctx, omega)?;
            let r = krawtchouk_relations(&pair.a, &pair.b, &w)?;
            krawtchouk_residuals(ctx, &r);
        }
        LeonardCmd::Subst { d, omega, emit } => {
            ctx.input("d", *d);
            ctx.input("omega", omega.as_str());
            let w = parse_scalar(ctx, omega)?;
            let f = build_ifs(&JacobiCoefficients::hamming_ladder(*d))?;
            let t = ksl2_substitution(&f, &w)?;
            let r = krawtchouk_relations(&t.a, &t.b, &w)?;
            krawtchouk_residuals(ctx, &r);
            if *emit {
                ctx.result(json!({"a": mat_to_json(&t.a), "b": mat_to_json(&t.b), "c": mat_to_json(&t.c)}));
            }
        }
        LeonardCmd::Qdata { k, d, epsilon, pair } => {
            ctx.input("k", *k);
            ctx.input("d", *d);
            ctx.input("epsilon", epsilon.as_str());
            let eps = parse_scalar(ctx, epsilon)?;
            let qd = anyon_qdata(*k, *d, &eps).map_err(|e| match e {
                Error::Domain(_) | Error::Admissibility(..) => negative(e),
                e => e.into(),
            })?;
            ctx.result(json!({
                "k": qd.k,
                "d": qd.d,
                "q": exact(&qd.q),
                "epsilon": exact(&qd.epsilon),
                "theta": qd.theta.iter().map(exact).collect::<Vec<_>>(),
                "theta_text": qd.theta.iter().map(Scalar::to_string).collect::<Vec<_>>(),
                "admissible": true,
            }));
            if *pair {
                let l = leonard_from_qdata(&qd, &ctx.settings)?;
                ctx.result(json!({
                    "a": mat_to_json(&l.candidate.a),
                    "b": mat_to_json(&l.candidate.b),
                    "leonard": to_value(&l.report),
                }));
            }
        }
    }
    Ok(())
}
