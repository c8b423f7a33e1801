use clap::{Args, Subcommand};
use schemespinlab::exactalg::json::mat_to_json;
use schemespinlab::ifs::{
    build_ifs, intersection_array, orthopoly_recurrence, sl2_check, stratify_distance_regular, InteractingFockSpace,
    JacobiCoefficients,
};
use schemespinlab::scheme::scheme_from_json;
use schemespinlab::{Mat, Scalar};
use serde_json::json;

use super::{texts, to_value, usage};
use crate::input::{matrix_from, read_json, read_list};
use crate::{CmdResult, Ctx, Failure};

#[derive(Args)]
pub struct Ladder {
    /// Ladder of the d-cube: ω_n = n(d − n + 1), α = 0.
    #[arg(long, conflicts_with = "omega")]
    d: Option<usize>,
    /// ω_1..ω_d, comma separated or @file.json.
    #[arg(long)]
    omega: Option<String>,
    /// α_1..α_{d+1}; zeros when omitted.
    #[arg(long, requires = "omega")]
    alpha: Option<String>,
}

#[derive(Subcommand)]
pub enum IfsCmd {
    /// Creation, annihilation and diagonal operators from Jacobi coefficients.
    Build {
        #[command(flatten)]
        ladder: Ladder,
    },
    /// Stratify a distance-regular graph by distance from a base vertex.
    Stratify {
        /// Adjacency matrix, or a scheme whose class 1 is the adjacency.
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Check the sl2 commutation relations of the ladder.
    Sl2 {
        #[command(flatten)]
        ladder: Ladder,
    },
    /// Evaluate the orthogonal polynomials P_0..P_n at sample points.
    Recurrence {
        #[command(flatten)]
        ladder: Ladder,
        #[arg(long)]
        n: usize,
        /// Sample points, comma separated.
        #[arg(long)]
        x: String,
    },
}

impl IfsCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            IfsCmd::Build { .. } => "build",
            IfsCmd::Stratify { .. } => "stratify",
            IfsCmd::Sl2 { .. } => "sl2",
            IfsCmd::Recurrence { .. } => "recurrence",
        }
    }
}

fn jacobi(ctx: &mut Ctx, l: &Ladder) -> Result<JacobiCoefficients, Failure> {
    match (l.d, &l.omega) {
        (Some(d), None) => {
            ctx.input("d", d);
            Ok(JacobiCoefficients::hamming_ladder(d))
        }
        (None, Some(omega)) => {
            ctx.input("omega", omega.as_str());
            let omega = read_list(ctx, omega)?;
            let alpha = match &l.alpha {
                Some(a) => {
                    ctx.input("alpha", a.as_str());
                    read_list(ctx, a)?
                }
                None => vec![Scalar::zero(); omega.len() + 1],
            };
            Ok(JacobiCoefficients::new(omega, alpha)?)
        }
        _ => Err(usage("give --d or --omega")),
    }
}

fn ifs_json(f: &InteractingFockSpace) -> serde_json::Value {
    json!({
        "dimension": f.dimension(),
        "omega": texts(&f.jacobi.omega),
        "alpha": texts(&f.jacobi.alpha),
        "b_plus": mat_to_json(&f.bplus),
        "b_minus": mat_to_json(&f.bminus),
        "b_circ": mat_to_json(&f.bcirc),
        "provenance": to_value(&f.provenance),
    })
}

fn adjacency(ctx: &mut Ctx, input: &str) -> Result<Mat, Failure> {
    let v = read_json(ctx, input)?;
    if v.get("classes").is_some() || v.get("labels").is_some() {
        let s = scheme_from_json(&v, &ctx.settings)?;
        if s.d() < 1 {
            return Err(usage("scheme has no class 1"));
        }
        Ok(s.class(1))
    } else {
        Ok(matrix_from(ctx, &v, "matrix")?)
    }
}

pub fn run(ctx: &mut Ctx, c: &IfsCmd) -> CmdResult {
    match c {
        IfsCmd::Build { ladder } => {
            let j = jacobi(ctx, ladder)?;
            let f = build_ifs(&j)?;
            ctx.result(ifs_json(&f));
            ctx.result(json!({"jacobi_matrix": mat_to_json(&f.t_matrix()?)}));
        }
        IfsCmd::Stratify { input, base } => {
            ctx.input("in", input.as_str());
            ctx.input("base", *base);
            let adj = adjacency(ctx, input)?;
            let array = intersection_array(&adj, &ctx.settings)?;
            ctx.result(json!({"intersection_array": to_value(&array)}));
            let s = stratify_distance_regular(&adj, *base, &ctx.settings)?;
            ctx.result(json!({
                "strata_sizes": s.strata_sizes,
                "compression_matches": s.compression_matches,
            }));
            ctx.result(ifs_json(&s.ifs));
            ctx.set_pass(s.compression_matches);
        }
        IfsCmd::Sl2 { ladder } => {
            let j = jacobi(ctx, ladder)?;
            let f = build_ifs(&j)?;
            let r = sl2_check(&f)?;
            ctx.residual("h_b_plus", r.residual_plus);
            ctx.residual("h_b_minus", r.residual_minus);
            ctx.residual("b_plus_b_minus", r.residual_bracket);
            ctx.residual("h_expected", r.residual_h_expected);
            let tol = ctx.tol_for(r.exact);
            let worst = r
                .residual_plus
                .max(r.residual_minus)
                .max(r.residual_bracket)
                .max(r.residual_h_expected);
            ctx.set_pass(worst <= tol);
            ctx.result(to_value(&r));
        }
        IfsCmd::Recurrence { ladder, n, x } => {
            let j = jacobi(ctx, ladder)?;
            ctx.input("n", *n);
            ctx.input("x", x.as_str());
            let xs = read_list(ctx, x)?;
            let r = orthopoly_recurrence(&j, *n, &xs)?;
            ctx.residual("recurrence", r.residual);
            let values: Vec<_> = r.values.iter().map(|row| texts(row)).collect();
            ctx.result(json!({"values": values}));
            let exact = xs.iter().all(Scalar::is_exact) && j.omega.iter().chain(&j.alpha).all(Scalar::is_exact);
            ctx.set_pass(r.residual <= ctx.tol_for(exact));
        }
    }
    Ok(())
}
