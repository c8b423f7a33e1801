use clap::Subcommand;
use schemespinlab::exactalg::json::mat_to_json;
use schemespinlab::exactalg::linalg::same_span;
use schemespinlab::spinmodel::{
    is_type_ii, is_type_iii, modular_invariance_check, nomura_algebra, potts_spin_model, search_type_iii,
    spin_model_from_scheme, trivial_scheme, ModularSide, SpinModelData,
};
use schemespinlab::{Mat, Mode};
use serde_json::{json, Value};

use super::{exact, text, texts, to_value, usage};
use crate::input::{read_list, read_matrix, read_scheme};
use crate::{CmdResult, Ctx};

#[derive(Subcommand)]
pub enum SpinCmd {
    /// Check W·(W⁽⁻⁾)ᵀ = nI.
    Typeii {
        #[arg(long = "in")]
        input: String,
    },
    /// Check the star-triangle identity for both signs of D.
    Typeiii {
        #[arg(long = "in")]
        input: String,
    },
    /// Basis of the Nomura algebra of a type-II matrix.
    Nomura {
        #[arg(long = "in")]
        input: String,
        /// Compare the span with the classes of this scheme.
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Potts spin models on n spins.
    Potts {
        #[arg(long)]
        n: usize,
    },
    /// Build W⁻ = Σ t_i A_i over a scheme and extract the model parameters.
    Synth {
        #[arg(long = "in")]
        input: String,
        /// Coefficients t_0..t_d, comma separated or @file.json.
        #[arg(long)]
        t: String,
    },
    /// Check (PT)³ ∝ I for a scheme and coefficient list, or for a Potts model.
    Modular {
        #[arg(long = "in", requires = "t")]
        input: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, conflicts_with = "input")]
        potts: Option<usize>,
    },
    /// Numerical search for type-III coefficient vectors on a scheme.
    Search {
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = 8)]
        starts: usize,
    },
}

impl SpinCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            SpinCmd::Typeii { .. } => "typeii",
            SpinCmd::Typeiii { .. } => "typeiii",
            SpinCmd::Nomura { .. } => "nomura",
            SpinCmd::Potts { .. } => "potts",
            SpinCmd::Synth { .. } => "synth",
            SpinCmd::Modular { .. } => "modular",
            SpinCmd::Search { .. } => "search",
        }
    }
}

fn model_json(m: &SpinModelData) -> Value {
    json!({
        "t": texts(&m.t),
        "w_minus": mat_to_json(&m.w_minus),
        "w_plus": mat_to_json(&m.w_plus),
        "a": exact(&m.a),
        "loop_scalar": exact(&m.loop_scalar),
        "type_ii": to_value(&m.type_ii),
        "type_iii": to_value(&m.type_iii),
    })
}

fn modular_side(name: &str, s: &ModularSide) -> Value {
    json!({
        "normalisation": name,
        "proportional": s.proportional,
        "mu": s.mu,
        "mu_exact": s.mu_value.as_ref().map(exact),
    })
}

fn modular(ctx: &mut Ctx, p: &Mat, model: &SpinModelData) -> CmdResult {
    let r = modular_invariance_check(p, &model.t_diag, Some(model), &ctx.settings)?;
    ctx.residual("modular_raw", r.raw.residual);
    ctx.residual("modular_normalized", r.column_normalized.residual);
    ctx.result(json!({
        "P": mat_to_json(p),
        "T": texts(&model.t_diag.diagonal()),
        "raw": modular_side("raw", &r.raw),
        "column_normalized": modular_side("column_normalized", &r.column_normalized),
        "expected_mu": r.expected.as_ref().map(text),
        "raw_matches_expected": r.raw_matches_expected,
    }));
    ctx.set_pass(r.raw.proportional);
    Ok(())
}

pub fn run(ctx: &mut Ctx, c: &SpinCmd) -> CmdResult {
    match c {
        SpinCmd::Typeii { input } => {
            ctx.input("in", input.as_str());
            let w = read_matrix(ctx, input)?;
            let r = is_type_ii(&w, &ctx.settings)?;
            ctx.residual("type_ii", r.residual);
            ctx.result(to_value(&r));
            ctx.set_pass(r.holds);
        }
        SpinCmd::Typeiii { input } => {
            ctx.input("in", input.as_str());
            let w = read_matrix(ctx, input)?;
            let r = is_type_iii(&w, &ctx.settings)?;
            ctx.residual("type_iii_plus", r.plus.residual);
            ctx.residual("type_iii_minus", r.minus.residual);
            ctx.result(to_value(&r));
            ctx.set_pass(r.holds);
        }
        SpinCmd::Nomura { input, scheme } => {
            ctx.input("in", input.as_str());
            let w = read_matrix(ctx, input)?;
            let r = nomura_algebra(&w, &ctx.settings)?;
            let closed = r.contains_identity && r.contains_ones && r.closed_under_product && r.closed_under_schur;
            ctx.result(json!({
                "dimension": r.dimension,
                "basis": r.basis.iter().map(mat_to_json).collect::<Vec<_>>(),
                "contains_identity": r.contains_identity,
                "contains_ones": r.contains_ones,
                "closed_under_product": r.closed_under_product,
                "closed_under_schur": r.closed_under_schur,
            }));
            ctx.set_pass(closed);
            if let Some(path) = scheme {
                ctx.input("scheme", path.as_str());
                let s = read_scheme(ctx, path)?;
                let spans = same_span(&r.basis, &s.classes(), ctx.settings.eps);
                ctx.result(json!({"spans_scheme_classes": spans}));
                ctx.set_pass(spans);
            }
        }
        SpinCmd::Potts { n } => {
            ctx.input("n", *n);
            let r = potts_spin_model(*n, &ctx.settings)?;
            let mut any = false;
            for s in &r.solutions {
                any |= s.type_ii.holds && s.type_iii.holds;
                let t_inv = s.t.inv().map(|ti| &s.t + &ti);
                ctx.residual("type_ii", s.type_ii.residual);
                ctx.result(json!({
                    "t": exact(&s.t),
                    "t_plus_t_inverse": t_inv.as_ref().map(text),
                    "c": exact(&s.c),
                    "w": mat_to_json(&s.w),
                    "distinct_coefficients": s.distinct,
                    "exact": s.exact,
                    "type_ii": to_value(&s.type_ii),
                    "type_iii": to_value(&s.type_iii),
                    "model": s.model.as_ref().map(model_json),
                }));
            }
            ctx.set_pass(any);
        }
        SpinCmd::Synth { input, t } => {
            ctx.input("in", input.as_str());
            ctx.input("t", t.as_str());
            let s = read_scheme(ctx, input)?;
            let coeffs = read_list(ctx, t)?;
            let m = spin_model_from_scheme(&s, &coeffs, &ctx.settings)?;
            ctx.residual("type_ii", m.type_ii.residual);
            ctx.residual("type_iii_plus", m.type_iii.plus.residual);
            ctx.residual("type_iii_minus", m.type_iii.minus.residual);
            ctx.set_pass(m.type_ii.holds && m.type_iii.holds);
            ctx.result(model_json(&m));
        }
        SpinCmd::Modular { input, t, potts } => match (input, t, potts) {
            (Some(input), Some(t), None) => {
                ctx.input("in", input.as_str());
                ctx.input("t", t.as_str());
                let s = read_scheme(ctx, input)?;
                let coeffs = read_list(ctx, t)?;
                let m = spin_model_from_scheme(&s, &coeffs, &ctx.settings)?;
                let (p, _) = s.eigenmatrices()?;
                modular(ctx, &p, &m)?;
            }
            (None, None, Some(n)) => {
                ctx.input("potts", *n);
                let r = potts_spin_model(*n, &ctx.settings)?;
                let s = trivial_scheme(*n, &ctx.settings)?;
                let (p, _) = s.eigenmatrices()?;
                let model = r
                    .solutions
                    .iter()
                    .filter(|s| s.type_iii.holds)
                    .find_map(|s| s.model.as_ref())
                    .ok_or_else(|| usage(format!("no Potts spin model with distinct coefficients for n = {n}")))?;
                let p = if model.t_diag.is_exact() || ctx.settings.mode == Mode::Approx { p } else { p.to_approx() };
                modular(ctx, &p, model)?;
            }
            _ => return Err(usage("give --in with --t, or --potts")),
        },
        SpinCmd::Search { input, starts } => {
            ctx.input("in", input.as_str());
            ctx.input("starts", *starts);
            let s = read_scheme(ctx, input)?;
            let r = search_type_iii(&s, *starts, &ctx.settings);
            ctx.residual("best", r.best_residual);
            ctx.set_pass(!r.distinct_solutions.is_empty());
            ctx.result(to_value(&r));
        }
    }
    Ok(())
}
