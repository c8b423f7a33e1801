//! Acceptance criteria 1–9. Each criterion runs once, in order, and prints one line:
//! `criterion N: PASS|FAIL  <title>  (<elapsed> s, limit <L> s)  <detail>`.
//!
//! Runtime limits are checked against wall-clock time of this (debug or release) build.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schemespinlab::catalog;
use schemespinlab::exactalg::linalg::same_span;
use schemespinlab::ifs::{build_ifs, sl2_check, stratify_distance_regular, JacobiCoefficients};
use schemespinlab::knotstat::{apply_r2, partition_function, star_triangle_check, StateGraph};
use schemespinlab::qleonard::{anyon_qdata, is_leonard_pair, krawtchouk_relations, ksl2_substitution, Verdict};
use schemespinlab::report::report_schema_validate;
use schemespinlab::scheme::hamming_scheme;
use schemespinlab::spinmodel::{
    is_type_ii, is_type_iii, modular_invariance_check, nomura_algebra, potts_spin_model, trivial_scheme,
};
use schemespinlab::tlbraid::{
    braid_representation, commuting_square_check, enumerate_diagrams, jones_index_values, markov_trace,
    tl_generators, verify_tl_relations,
};
use schemespinlab::exactalg::scalar::golden_ratio;
use schemespinlab::{Mat, Rational, Scalar, Settings};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn exact() -> Settings {
    Settings::default()
}

fn catalog_matrix(id: &str) -> Result<Mat, String> {
    catalog::get(id).and_then(|e| e.matrix()).map_err(err)
}

fn c1_golden_scheme16() -> Check {
    let s = exact();
    let entry = catalog::get("scheme16").map_err(err)?;
    let scheme = entry.scheme(&s).map_err(err)?;
    ensure!(scheme.n() == 16 && scheme.d() == 3, "expected 16 vertices and 3 classes");
    let shown = &entry.expected["intersection_numbers"];
    let display: Vec<Vec<Vec<i64>>> = serde_json::from_value(shown.value.clone()).map_err(err)?;
    let map = shown.superscript_map.clone().unwrap_or_else(|| (0..4).collect());
    let p = scheme.intersection_numbers();
    let mut deviation = 0i64;
    for (t, matrix) in display.iter().enumerate() {
        for (i, row) in matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                deviation = deviation.max((p[map[t]][i][j] - v).abs());
            }
        }
    }
    ensure!(deviation == 0, "intersection numbers deviate from the display by {deviation}");
    let krein = scheme.krein_parameters().map_err(err)?;
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let q = &krein.q[k][i][j];
                ensure!(
                    q.is_exact() && q.eq_tol(&Scalar::int(p[k][i][j]), 0.0),
                    "q^{k}_{i}{j} = {q} but p^{k}_{i}{j} = {}",
                    p[k][i][j]
                );
            }
        }
    }
    Ok(format!("4 displayed matrices exact (superscripts {map:?}); q = p under the identity"))
}

fn c2_type_ii() -> Check {
    let s = exact();
    for id in ["W1", "W2", "W3"] {
        let w = catalog_matrix(id)?;
        let r = is_type_ii(&w, &s).map_err(err)?;
        ensure!(w.is_exact() && r.holds && r.residual == 0.0, "{id} fails type II, residual {}", r.residual);
    }
    let mut dims = Vec::new();
    for (w, scheme_id, dim) in [("W2", "z3", 3), ("W3", "z4", 4)] {
        let n = nomura_algebra(&catalog_matrix(w)?, &s).map_err(err)?;
        let scheme = catalog::get(scheme_id).and_then(|e| e.scheme(&s)).map_err(err)?;
        ensure!(n.dimension == dim, "dim N({w}) = {} not {dim}", n.dimension);
        ensure!(same_span(&n.basis, &scheme.classes(), 0.0), "N({w}) does not span the {scheme_id} classes");
        dims.push(format!("dim N({w}) = {dim} = span {scheme_id}"));
    }
    Ok(format!("W1, W2, W3 type II with residual 0; {}", dims.join(", ")))
}

fn c3_potts() -> Check {
    let s = exact();
    let r = potts_spin_model(3, &s).map_err(err)?;
    let sol = r
        .solutions
        .iter()
        .find(|x| x.exact && x.model.is_some())
        .ok_or("no exact Potts solution with distinct coefficients")?;
    let sum = &sol.t + &sol.t.inv().ok_or("t = 0")?;
    ensure!(sum.is_exact() && sum.eq_tol(&Scalar::one(), 0.0), "t + 1/t = {sum}");
    ensure!(sol.type_ii.holds && sol.type_ii.residual == 0.0, "type II residual {}", sol.type_ii.residual);
    let sign = sol.type_iii.sign.ok_or("type III fails for both signs of D")?;
    let model = sol.model.as_ref().ok_or("missing model data")?;
    let (p, _) = trivial_scheme(3, &s).and_then(|x| x.eigenmatrices()).map_err(err)?;
    let m = modular_invariance_check(&p, &model.t_diag, Some(model), &s).map_err(err)?;
    ensure!(m.raw.proportional, "(PT)^3 is not proportional to I, residual {}", m.raw.residual);
    let mu = m.raw.mu.clone().ok_or("no scalar reported")?;
    Ok(format!("t = {}, t + 1/t = 1, type III with D sign {sign:+}, (PT)^3 = ({mu})·I", sol.t))
}

fn c4_sl2() -> Check {
    for d in 1..=32usize {
        let f = build_ifs(&JacobiCoefficients::hamming_ladder(d)).map_err(err)?;
        let r = sl2_check(&f).map_err(err)?;
        let worst = r.residual_plus.max(r.residual_minus).max(r.residual_bracket).max(r.residual_h_expected);
        ensure!(r.exact && worst == 0.0, "d = {d}: residual {worst}, exact {}", r.exact);
    }
    // Brute-force cube intersection numbers: vertices are 3-bit words, distance is popcount of xor.
    let d = 3u32;
    let dist = |x: usize, y: usize| (x ^ y).count_ones();
    let count = |x: usize, h: u32| (0..1usize << d).filter(|&y| dist(x, y) == 1 && dist(0, y) == h).count() as i64;
    let mut omega = Vec::new();
    for h in 1..=d {
        let x = (1usize << h) - 1;
        let c = count(x, h - 1);
        let prev = (1usize << (h - 1)) - 1;
        let b = count(prev, h);
        omega.push(c * b);
    }
    ensure!(omega == vec![3, 4, 3], "brute force gave {omega:?}");
    let cube = hamming_scheme(3, 2, &exact()).map_err(err)?;
    let st = stratify_distance_regular(&cube.class(1), 0, &exact()).map_err(err)?;
    let got: Vec<Scalar> = st.ifs.jacobi.omega.clone();
    let want: Vec<Scalar> = omega.iter().map(|&w| Scalar::int(w)).collect();
    ensure!(got == want, "stratification gave {got:?}");
    Ok("d = 1..32 all sl2 residuals exactly 0; cube ω = (3,4,3) matches brute force".into())
}

fn c5_krawtchouk() -> Check {
    for omega in [Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::int(2)] {
        for d in 1..=16usize {
            let f = build_ifs(&JacobiCoefficients::hamming_ladder(d)).map_err(err)?;
            let t = ksl2_substitution(&f, &omega).map_err(err)?;
            let r = krawtchouk_relations(&t.a, &t.b, &omega).map_err(err)?;
            ensure!(r.exact && r.max_residual() == 0.0, "ω = {omega}, d = {d}: residual {}", r.max_residual());
        }
    }
    let pair = catalog::get("leonard4").and_then(|e| e.leonard_pair()).map_err(err)?;
    let lr = is_leonard_pair(&pair, &exact()).map_err(err)?;
    ensure!(lr.verdict == Verdict::Holds, "4x4 pair verdict {:?}", lr.verdict);
    for (k, d) in [(2, 1), (3, 3)] {
        let q = anyon_qdata(k, d, &Scalar::one()).map_err(|e| format!("(k={k}, d={d}) rejected: {e}"))?;
        for i in 0..q.theta.len() {
            for j in i + 1..q.theta.len() {
                ensure!(!q.theta[i].eq_tol(&q.theta[j], 0.0), "(k={k}, d={d}) θ_{i} = θ_{j}");
            }
        }
    }
    ensure!(anyon_qdata(2, 4, &Scalar::one()).is_err(), "(k=2, d=4) was accepted");
    Ok("ω ∈ {1/2, 1/3, 2}, d ≤ 16 exact; 4x4 pair is Leonard; qdata (2,1), (3,3) admissible, (2,4) rejected".into())
}

fn catalan(n: u64) -> usize {
    let mut c = 1u64;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c as usize
}

fn c6_tl_braid() -> Check {
    for n in 1..=5usize {
        ensure!(enumerate_diagrams(n).len() == catalan(n as u64), "dim TL_{n} is not Catalan({n})");
        if n < 2 {
            // no generators on one strand
            continue;
        }
        for delta in [Scalar::int(2), golden_ratio()] {
            let r = verify_tl_relations(n, &delta).map_err(err)?;
            ensure!(r.exact && r.max_residual() == 0.0, "n = {n}, δ = {delta}: residual {}", r.max_residual());
            let lambda_inv = (&delta * &delta).inv().ok_or("δ = 0")?;
            for (i, e) in tl_generators(n, &delta).map_err(err)?.iter().enumerate() {
                let t = markov_trace(e).map_err(err)?;
                ensure!(t.eq_tol(&lambda_inv, 0.0), "tr(e_{}) = {t}, expected {lambda_inv}", i + 1);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(exact().seed);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let a = if k % 2 == 0 {
            Scalar::approx(rng.gen_range(0.3..3.0), 0.0)
        } else {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Scalar::approx(th.cos(), th.sin())
        };
        let b = braid_representation(5, &a).map_err(err)?;
        worst = worst.max(b.report.max_residual());
    }
    ensure!(worst < 1e-10, "braid residual {worst:e}");
    let targets = [(3, 1.0), (4, 2.0), (5, (3.0 + 5f64.sqrt()) / 2.0), (6, 3.0)];
    for (n, want) in targets {
        let v = jones_index_values(n).map_err(err)?.to_complex();
        ensure!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12, "index n = {n}: {v}");
    }
    Ok(format!("TL relations exact for 2 ≤ n ≤ 5, δ ∈ {{2, φ}}; Catalan dims; tr(e_i) = λ⁻¹; braid max residual {worst:.1e} over 20 A; Jones values"))
}

fn c7_commuting_square() -> Check {
    let s = exact();
    for id in ["W1", "W2"] {
        let r = commuting_square_check(&catalog_matrix(id)?, &s).map_err(err)?;
        ensure!(r.exact && r.pass && r.residual == 0.0, "{id} residual {}", r.residual);
    }
    let r = commuting_square_check(&Mat::identity(3), &s).map_err(err)?;
    ensure!(!r.pass, "identity passed");
    let w = r.witness.ok_or("identity failed without a witness")?;
    Ok(format!("W1, W2 residual 0; W = I fails at matrix unit {w:?}, residual {}", r.residual))
}

fn c8_knot() -> Check {
    let s = exact();
    let g = StateGraph::canonical_r2();
    let moved = apply_r2(&g, 0, 1).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    for trial in 0..10 {
        let n = rng.gen_range(2..=4usize);
        let entries: Vec<Scalar> = (0..n * n)
            .map(|_| {
                let num = loop {
                    let v: i64 = rng.gen_range(-9..=9);
                    if v != 0 {
                        break v;
                    }
                };
                Scalar::rational(&Rational::new(num.into(), rng.gen_range(1..=7i64).into()))
            })
            .collect();
        let w = Mat::new(n, entries).map_err(err)?;
        let wm = w.schur_inverse().map_err(err)?;
        let before = partition_function(&g, &w, &wm, &s).map_err(err)?;
        let after = partition_function(&moved, &w, &wm, &s).map_err(err)?;
        ensure!(before.eq_tol(&after, 0.0), "trial {trial} (n = {n}): {before} vs {after}");
    }
    let potts = potts_spin_model(3, &s).map_err(err)?;
    let mut checked = 0;
    for sol in &potts.solutions {
        let Some(model) = &sol.model else { continue };
        let t3 = is_type_iii(&sol.w, &s).map_err(err)?;
        if !t3.holds {
            continue;
        }
        let st = star_triangle_check(&model.w_plus, &model.w_minus, &s).map_err(err)?;
        ensure!(st.sign.is_some(), "type III holds but star/triangle identity fails: {st:?}");
        checked += 1;
    }
    ensure!(checked > 0, "no Potts n = 3 model satisfies type III");
    Ok(format!("R2 invariance on 10 random W⁺; star/triangle identity for {checked} Potts model(s)"))
}

fn golden_commands() -> Vec<Vec<String>> {
    let mut cmds: Vec<Vec<String>> = catalog::list()
        .into_iter()
        .map(|id| vec!["catalog".into(), "golden".into(), id])
        .collect();
    for extra in [
        "scheme verify --in catalog:z3",
        "scheme tensors --in catalog:scheme16",
        "spin potts --n 3",
        "spin modular --potts 3",
        "ifs sl2 --d 3",
        "leonard check --in catalog:leonard4",
        "tl square --in catalog:W2",
    ] {
        cmds.push(extra.split(' ').map(String::from).collect());
    }
    cmds
}

fn c9_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_schemespinlab");
    let cmds = golden_commands();
    for args in &cmds {
        let mut outputs = Vec::new();
        for _ in 0..3 {
            let out = Command::new(bin).args(["--seed", "7"]).args(args).output().map_err(err)?;
            outputs.push(out.stdout);
        }
        ensure!(
            outputs[0] == outputs[1] && outputs[1] == outputs[2],
            "`{}` differs between runs",
            args.join(" ")
        );
        let v: serde_json::Value = serde_json::from_slice(&outputs[0]).map_err(err)?;
        ensure!(report_schema_validate(&v), "`{}` report fails the schema", args.join(" "));
        ensure!(v["seed"] == 7, "`{}` does not record the seed", args.join(" "));
    }
    Ok(format!("{} commands x 3 runs byte-identical", cmds.len()))
}

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Option<f64>,
    run: fn() -> Check,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, title: "golden 16-vertex scheme", limit: Some(5.0), run: c1_golden_scheme16 },
    Criterion { id: 2, title: "type-II verification", limit: Some(5.0), run: c2_type_ii },
    Criterion { id: 3, title: "Potts synthesis", limit: Some(2.0), run: c3_potts },
    Criterion { id: 4, title: "IFS / sl2", limit: Some(10.0), run: c4_sl2 },
    Criterion { id: 5, title: "Krawtchouk / Leonard", limit: Some(10.0), run: c5_krawtchouk },
    Criterion { id: 6, title: "TL / braid", limit: Some(30.0), run: c6_tl_braid },
    Criterion { id: 7, title: "commuting squares", limit: Some(5.0), run: c7_commuting_square },
    Criterion { id: 8, title: "knot invariance", limit: Some(10.0), run: c8_knot },
    Criterion { id: 9, title: "CLI determinism", limit: None, run: c9_determinism },
];

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = c.limit.map_or(true, |l| elapsed <= Duration::from_secs_f64(l));
        let pass = outcome.is_ok() && in_time;
        let limit = c.limit.map_or("none".to_string(), |l| format!("{l} s"));
        let detail = match &outcome {
            Ok(d) if in_time => d.clone(),
            Ok(d) => format!("over the time limit; {d}"),
            Err(e) => e.clone(),
        };
        println!(
            "criterion {}: {}  {}  ({:.2} s, limit {limit})  {detail}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
