use clap::Subcommand;
use schemespinlab::exactalg::json::mat_to_json;
use schemespinlab::scheme::{
    cyclic_table, generalized_hamming, generalized_hamming_class_labels, group_scheme, hamming_scheme,
    su2_clebsch_gordan, AssociationScheme,
};
use schemespinlab::Error;
use serde_json::{json, Value};

use super::{text, to_value, usage};
use crate::input::{read_json, read_scheme};
use crate::{CmdResult, Ctx};

#[derive(Subcommand)]
pub enum SchemeCmd {
    /// Check the scheme axioms for a class collection.
    Verify {
        #[arg(long = "in")]
        input: String,
    },
    /// Intersection numbers, eigenmatrices and Krein parameters.
    Tensors {
        #[arg(long = "in")]
        input: String,
    },
    /// Look for a class permutation carrying intersection numbers to Krein parameters.
    Dual {
        #[arg(long = "in")]
        input: String,
    },
    /// Structure constants of the renormalised idempotents under the Schur product.
    Hypergroup {
        #[arg(long = "in")]
        input: String,
    },
    /// Hamming scheme H(d, q).
    Hamming {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
        /// Include the class matrices in the report.
        #[arg(long)]
        emit: bool,
    },
    /// Generalised Hamming scheme over a base scheme.
    Genham {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        base: String,
        #[arg(long)]
        emit: bool,
    },
    /// Translation scheme of an abelian group.
    Group {
        /// Use the cyclic group of this order.
        #[arg(long, conflicts_with = "table")]
        cyclic: Option<usize>,
        /// JSON file holding a multiplication table (a list of rows, or {"table": ...}).
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        emit: bool,
    },
    /// Clebsch-Gordan transition probability from level i to level j.
    Cg {
        #[arg(long)]
        i: u64,
        #[arg(long)]
        j: u64,
    },
}

impl SchemeCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            SchemeCmd::Verify { .. } => "verify",
            SchemeCmd::Tensors { .. } => "tensors",
            SchemeCmd::Dual { .. } => "dual",
            SchemeCmd::Hypergroup { .. } => "hypergroup",
            SchemeCmd::Hamming { .. } => "hamming",
            SchemeCmd::Genham { .. } => "genham",
            SchemeCmd::Group { .. } => "group",
            SchemeCmd::Cg { .. } => "cg",
        }
    }
}

const AXIOMS: [(u8, &str); 5] = [
    (1, "identity is a class"),
    (3, "closed under transpose"),
    (2, "classes partition all pairs"),
    (4, "products lie in the span"),
    (5, "commutative"),
];

pub fn summary(s: &AssociationScheme) -> Value {
    json!({
        "vertices": s.n(),
        "classes": s.d(),
        "valencies": s.valencies(),
        "commutative": s.is_commutative(),
        "origin": s.origin(),
        "fully_verified": s.fully_verified(),
    })
}

fn emit_classes(ctx: &mut Ctx, s: &AssociationScheme, emit: bool) {
    if emit {
        ctx.result(json!({"scheme": s.to_json()}));
    }
}

fn constructed(ctx: &mut Ctx, s: &AssociationScheme, emit: bool) {
    ctx.result(json!({"summary": summary(s), "intersection_numbers": s.intersection_numbers()}));
    emit_classes(ctx, s, emit);
}

fn verify(ctx: &mut Ctx, input: &str) -> CmdResult {
    let v = read_json(ctx, input)?;
    let outcome = schemespinlab::scheme::scheme_from_json(&v, &ctx.settings);
    let (failed_at, witness, scheme) = match outcome {
        Ok(s) => {
            let at = (!s.is_commutative()).then_some(5u8);
            let w = at.map(|_| "some A_i A_j differs from A_j A_i".to_string());
            (at, w, Some(s))
        }
        Err(Error::Axiom { axiom, witness }) => (Some(axiom), Some(witness), None),
        Err(Error::NotAScheme(msg)) => (Some(2), Some(msg), None),
        Err(e) => return Err(e.into()),
    };
    let mut reached_failure = false;
    let mut axioms = Vec::new();
    for (number, name) in AXIOMS {
        let status = if reached_failure {
            "not_checked"
        } else if failed_at == Some(number) {
            reached_failure = true;
            "fail"
        } else {
            "pass"
        };
        let mut entry = json!({"axiom": number, "name": name, "status": status});
        if status == "fail" {
            entry["witness"] = json!(witness);
        }
        axioms.push(entry);
    }
    ctx.result(json!({"axioms": axioms}));
    if let Some(s) = &scheme {
        ctx.result(json!({"summary": summary(s)}));
    }
    ctx.set_pass(failed_at.is_none());
    Ok(())
}

fn tensors(ctx: &mut Ctx, input: &str) -> CmdResult {
    let s = read_scheme(ctx, input)?;
    ctx.result(json!({"summary": summary(&s), "intersection_numbers": s.intersection_numbers()}));
    let (p, q) = s.eigenmatrices()?;
    let spectral = s.spectral()?;
    ctx.result(json!({
        "P": mat_to_json(&p),
        "Q": mat_to_json(&q),
        "multiplicities": spectral.multiplicities,
    }));
    let krein = s.krein_parameters()?;
    let tensor: Vec<Vec<Vec<Value>>> = krein
        .q
        .iter()
        .map(|a| a.iter().map(|b| b.iter().map(text).collect()).collect())
        .collect();
    ctx.result(json!({"krein_parameters": tensor, "krein_violations": to_value(&krein.violations)}));
    ctx.set_pass(krein.violations.is_empty());
    Ok(())
}

fn dual(ctx: &mut Ctx, input: &str) -> CmdResult {
    let s = read_scheme(ctx, input)?;
    let r = s.self_duality_check()?;
    ctx.residual("max_deviation", r.max_deviation);
    ctx.residual("identity_deviation", r.identity_deviation);
    ctx.result(to_value(&r));
    ctx.set_pass(r.is_self_dual);
    Ok(())
}

fn hypergroup(ctx: &mut Ctx, input: &str) -> CmdResult {
    let s = read_scheme(ctx, input)?;
    let r = s.hypergroup_coefficients()?;
    let c: Vec<Vec<Vec<Value>>> = r
        .c
        .iter()
        .map(|a| a.iter().map(|b| b.iter().map(text).collect()).collect())
        .collect();
    ctx.residual("hypergroup", r.residual);
    ctx.result(json!({"coefficients": c}));
    ctx.set_pass(r.residual <= ctx.tol_for(s.settings().mode == schemespinlab::Mode::Exact));
    Ok(())
}

fn read_table(ctx: &mut Ctx, spec: &str) -> Result<Vec<Vec<usize>>, crate::Failure> {
    let v = read_json(ctx, spec)?;
    let rows = v.get("table").unwrap_or(&v);
    serde_json::from_value(rows.clone()).map_err(|e| usage(format!("bad group table: {e}")))
}

pub fn run(ctx: &mut Ctx, c: &SchemeCmd) -> CmdResult {
    match c {
        SchemeCmd::Verify { input } => {
            ctx.input("in", input.as_str());
            verify(ctx, input)
        }
        SchemeCmd::Tensors { input } => {
            ctx.input("in", input.as_str());
            tensors(ctx, input)
        }
        SchemeCmd::Dual { input } => {
            ctx.input("in", input.as_str());
            dual(ctx, input)
        }
        SchemeCmd::Hypergroup { input } => {
            ctx.input("in", input.as_str());
            hypergroup(ctx, input)
        }
        SchemeCmd::Hamming { d, q, emit } => {
            ctx.input("d", *d);
            ctx.input("q", *q);
            let s = hamming_scheme(*d, *q, &ctx.settings)?;
            constructed(ctx, &s, *emit);
            Ok(())
        }
        SchemeCmd::Genham { n, base, emit } => {
            ctx.input("n", *n);
            ctx.input("base", base.as_str());
            let b = read_scheme(ctx, base)?;
            let s = generalized_hamming(*n, &b, &ctx.settings)?;
            ctx.result(json!({"class_compositions": generalized_hamming_class_labels(*n, b.d() + 1)}));
            constructed(ctx, &s, *emit);
            Ok(())
        }
        SchemeCmd::Group { cyclic, table, emit } => {
            let t = match (cyclic, table) {
                (Some(n), None) => {
                    ctx.input("cyclic", *n);
                    if *n == 0 {
                        return Err(usage("--cyclic needs a positive order"));
                    }
                    cyclic_table(*n)
                }
                (None, Some(path)) => {
                    ctx.input("table", path.as_str());
                    read_table(ctx, path)?
                }
                _ => return Err(usage("give exactly one of --cyclic or --table")),
            };
            let s = group_scheme(&t, &ctx.settings)?;
            constructed(ctx, &s, *emit);
            Ok(())
        }
        SchemeCmd::Cg { i, j } => {
            ctx.input("i", *i);
            ctx.input("j", *j);
            let p = su2_clebsch_gordan(*i, *j)?;
            ctx.result(json!({"probability": p.to_string()}));
            Ok(())
        }
    }
}
