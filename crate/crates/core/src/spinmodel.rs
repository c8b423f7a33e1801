//! Type-II and type-III matrices, Nomura algebras, Potts models, spin-model
//! parameters and modular invariance.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::{coordinates, nullspace};
use crate::exactalg::recognize::{candidate_orders, recognize_in_order};
use crate::exactalg::{Cyclo, Mat, Scalar};
use crate::scheme::{verify_axioms, AssociationScheme};
use crate::settings::Settings;

#[derive(Debug, Clone, Serialize)]
pub struct TypeIIReport {
    pub holds: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIIISide {
    /// +1 for D = +√n, −1 for D = −√n.
    pub sign: i8,
    pub holds: bool,
    pub residual: f64,
    /// Triple (a, b, x) with the largest deviation.
    pub worst_triple: (usize, usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIIIReport {
    pub holds: bool,
    /// Sign of D for which the identity holds, if any (+1 preferred).
    pub sign: Option<i8>,
    pub plus: TypeIIISide,
    pub minus: TypeIIISide,
}

#[derive(Debug, Clone)]
pub struct NomuraReport {
    pub basis: Vec<Mat>,
    pub dimension: usize,
    pub contains_identity: bool,
    pub contains_ones: bool,
    pub closed_under_product: bool,
    pub closed_under_schur: bool,
}

#[derive(Debug, Clone)]
pub struct SpinModelData {
    pub t: Vec<Scalar>,
    pub w_minus: Mat,
    pub w_plus: Mat,
    pub a: Scalar,
    pub loop_scalar: Scalar,
    pub t_diag: Mat,
    pub type_ii: TypeIIReport,
    pub type_iii: TypeIIIReport,
}

#[derive(Debug, Clone)]
pub struct PottsSolution {
    pub t: Scalar,
    pub c: Scalar,
    pub w: Mat,
    pub distinct: bool,
    pub model: Option<SpinModelData>,
    pub type_ii: TypeIIReport,
    pub type_iii: TypeIIIReport,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct PottsReport {
    pub n: usize,
    pub solutions: Vec<PottsSolution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularSide {
    pub proportional: bool,
    pub mu: Option<String>,
    #[serde(skip)]
    pub mu_value: Option<Scalar>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ModularReport {
    pub raw: ModularSide,
    pub column_normalized: ModularSide,
    /// loopScalar³·a⁻¹ when model data was supplied.
    pub expected: Option<Scalar>,
    pub raw_matches_expected: Option<bool>,
}

fn require_square_same(a: &Mat, b: &Mat) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("{} vs {}", a.n(), b.n())));
    }
    Ok(())
}

/// W·(W⁽⁻⁾)ᵀ = nI.
pub fn is_type_ii(w: &Mat, settings: &Settings) -> Result<TypeIIReport> {
    let inv = w.schur_inverse()?;
    let n = w.n() as i64;
    let prod = w.mul(&inv.transpose())?;
    let diff = prod.sub(&Mat::identity(w.n()).scale(&Scalar::int(n)))?;
    Ok(TypeIIReport {
        holds: diff.is_zero_tol(settings.eps),
        residual: diff.max_abs(),
    })
}

fn type_iii_side(w: &Mat, inv: &Mat, d: &Scalar, sign: i8, eps: f64) -> TypeIIISide {
    let n = w.n();
    let mut worst = 0.0f64;
    let mut worst_triple = (0, 0, 0);
    let mut holds = true;
    for a in 0..n {
        for b in 0..n {
            let u: Vec<Scalar> = (0..n).map(|y| w.get(a, y) * w.get(b, y)).collect();
            for x in 0..n {
                let lhs: Scalar = (0..n).map(|y| &u[y] * inv.get(x, y)).sum();
                let rhs = &(d * w.get(a, b)) * &(inv.get(x, a) * inv.get(x, b));
                let diff = &lhs - &rhs;
                let ok = diff.is_zero_tol(eps);
                holds &= ok;
                let dev = diff.abs();
                if dev > worst || (!ok && worst == 0.0) {
                    worst = dev;
                    worst_triple = (a, b, x);
                }
            }
        }
    }
    TypeIIISide {
        sign,
        holds,
        residual: worst,
        worst_triple,
    }
}

/// Checks Σ_y W_ay W_by / W_xy = D·W_ab/(W_xa W_xb) for all triples with D = ±√n.
pub fn is_type_iii(w: &Mat, settings: &Settings) -> Result<TypeIIIReport> {
    let t2 = is_type_ii(w, settings)?;
    if !t2.holds {
        return Err(Error::Precondition("matrix is not type II".into()));
    }
    let inv = w.schur_inverse()?;
    let root = Scalar::int(w.n() as i64).sqrt();
    let root = if w.is_exact() { root } else { root.to_approx() };
    let plus = type_iii_side(w, &inv, &root, 1, settings.eps);
    let minus = type_iii_side(w, &inv, &-&root, -1, settings.eps);
    let sign = if plus.holds {
        Some(1)
    } else if minus.holds {
        Some(-1)
    } else {
        None
    };
    Ok(TypeIIIReport {
        holds: sign.is_some(),
        sign,
        plus,
        minus,
    })
}

/// All M for which every Y_ij = We_i ∘ W⁽⁻⁾e_j is an eigenvector.
pub fn nomura_algebra(w: &Mat, settings: &Settings) -> Result<NomuraReport> {
    let inv = w.schur_inverse()?;
    let n = w.n();
    let eps = settings.eps;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    // (MY)_a·Y_0 − (MY)_0·Y_a = 0 for a ≥ 1; Y has no zero entries.
    for i in 0..n {
        for j in 0..n {
            let y: Vec<Scalar> = (0..n).map(|r| w.get(r, i) * inv.get(r, j)).collect();
            for a in 1..n {
                let mut row = vec![Scalar::zero(); n * n];
                for c in 0..n {
                    row[a * n + c] = &y[c] * &y[0];
                    row[c] = -(&y[c] * &y[a]);
                }
                rows.push(row);
            }
        }
    }
    let ns = nullspace(&rows, n * n, eps);
    let basis: Vec<Mat> = ns
        .into_iter()
        .map(|v| Mat::new(n, v))
        .collect::<Result<Vec<_>>>()?;
    let in_span = |m: &Mat| coordinates(&basis, m, eps).is_some();
    let contains_identity = in_span(&Mat::identity(n));
    let contains_ones = in_span(&Mat::ones(n));
    let mut closed_under_product = true;
    let mut closed_under_schur = true;
    for a in &basis {
        for b in &basis {
            closed_under_product &= in_span(&a.mul(b)?);
            closed_under_schur &= in_span(&a.schur_product(b)?);
        }
    }
    Ok(NomuraReport {
        dimension: basis.len(),
        basis,
        contains_identity,
        contains_ones,
        closed_under_product,
        closed_under_schur,
    })
}

/// Exact square root of an exact value by recognition, verified by squaring.
fn exact_sqrt(v: &Scalar) -> Option<Scalar> {
    let c = v.as_cyclo()?;
    if let Some(r) = c.as_rational() {
        return Cyclo::sqrt_rational(&r).map(Scalar::Exact);
    }
    let z = c.to_complex().sqrt();
    for order in candidate_orders(c.order()) {
        if let Some(root) = recognize_in_order(z, order) {
            if root.mul(&root) == *c {
                return Some(Scalar::Exact(root));
            }
        }
    }
    None
}

pub fn trivial_scheme(n: usize, settings: &Settings) -> Result<AssociationScheme> {
    let id = Mat::identity(n);
    let b = Mat::ones(n).sub(&id)?;
    verify_axioms(&[id, b], settings)
}

/// Potts model on n states: t + t⁻¹ = n − 2, c² = √n/(1 − (n−1)t), W = c(I − tB).
pub fn potts_spin_model(n: usize, settings: &Settings) -> Result<PottsReport> {
    if n < 2 {
        return Err(Error::Domain("Potts model needs n >= 2".into()));
    }
    let ni = n as i64;
    let disc = Scalar::int(ni * ni - 4 * ni).sqrt();
    let half = Scalar::ratio(1, 2);
    let mut ts = vec![&(&Scalar::int(ni - 2) + &disc) * &half];
    let other = &(&Scalar::int(ni - 2) - &disc) * &half;
    if !other.eq_tol(&ts[0], settings.eps) {
        ts.push(other);
    }
    let scheme = trivial_scheme(n, settings)?;
    let id = Mat::identity(n);
    let b = Mat::ones(n).sub(&id)?;
    let root_n = Scalar::int(ni).sqrt();
    let mut solutions = Vec::new();
    for t in ts {
        let denom = &Scalar::one() - &(&Scalar::int(ni - 1) * &t);
        let c2 = root_n
            .div(&denom)
            .ok_or_else(|| Error::Domain("1 − (n−1)t vanishes".into()))?;
        let (c, exact) = match exact_sqrt(&c2) {
            Some(c) => (c, true),
            None => (Scalar::Approx(c2.to_complex().sqrt()), false),
        };
        let (t, c) = if exact { (t, c) } else { (t.to_approx(), c) };
        let w = id.sub(&b.scale(&t))?.scale(&c);
        let coeffs = vec![c.clone(), -(&c * &t)];
        let distinct = !coeffs[0].eq_tol(&coeffs[1], settings.eps);
        let type_ii = is_type_ii(&w, settings)?;
        let type_iii = is_type_iii(&w, settings)?;
        let model = if distinct {
            Some(spin_model_from_scheme(&scheme, &coeffs, settings)?)
        } else {
            None
        };
        solutions.push(PottsSolution {
            t,
            c,
            w,
            distinct,
            model,
            type_ii,
            type_iii,
            exact,
        });
    }
    Ok(PottsReport { n, solutions })
}

/// Builds W⁻ = Σ t_i A_i and W⁺ = (W⁻ᵀ)⁽⁻⁾ and extracts (a, loopScalar).
pub fn spin_model_from_scheme(s: &AssociationScheme, t: &[Scalar], settings: &Settings) -> Result<SpinModelData> {
    if !s.is_commutative() {
        return Err(Error::NonCommutative);
    }
    if t.len() != s.d() + 1 {
        return Err(Error::Dimension(format!("{} coefficients for {} classes", t.len(), s.d() + 1)));
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i].eq_tol(&t[j], settings.eps) {
                return Err(Error::Precondition(format!("coefficients t_{i} and t_{j} coincide")));
            }
        }
    }
    let w_minus = Mat::linear_combination(t, &s.classes())?;
    let w_plus = w_minus.transpose().schur_inverse()?;
    let n = s.n();
    let diag = w_minus.diagonal();
    if !diag.iter().all(|x| x.eq_tol(&diag[0], settings.eps)) {
        return Err(Error::NoParameterA);
    }
    let a = diag[0].inv().ok_or(Error::NoParameterA)?;
    let col_sums: Vec<Scalar> = (0..n).map(|j| w_plus.column(j).into_iter().sum()).collect();
    let row_sums: Vec<Scalar> = (0..n).map(|i| w_plus.row(i).iter().cloned().sum()).collect();
    let s0 = col_sums[0].clone();
    if !col_sums.iter().chain(&row_sums).all(|x| x.eq_tol(&s0, settings.eps)) {
        return Err(Error::NoLoopScalar);
    }
    // J W⁺ = loopScalar·a⁻¹·J
    let loop_scalar = &s0 * &a;
    let type_ii = is_type_ii(&w_minus, settings)?;
    let type_iii = if type_ii.holds {
        is_type_iii(&w_minus, settings)?
    } else {
        let side = |sign| TypeIIISide {
            sign,
            holds: false,
            residual: f64::NAN,
            worst_triple: (0, 0, 0),
        };
        TypeIIIReport {
            holds: false,
            sign: None,
            plus: side(1),
            minus: side(-1),
        }
    };
    Ok(SpinModelData {
        t: t.to_vec(),
        t_diag: Mat::diag(t),
        w_minus,
        w_plus,
        a,
        loop_scalar,
        type_ii,
        type_iii,
    })
}

fn modular_side(p: &Mat, t: &Mat, eps: f64) -> Result<ModularSide> {
    let pt = p.mul(t)?;
    let cube = pt.mul(&pt)?.mul(&pt)?;
    let mu = cube.get(0, 0).clone();
    let diff = cube.sub(&Mat::identity(p.n()).scale(&mu))?;
    let proportional = diff.is_zero_tol(eps) && !mu.is_zero_tol(eps);
    Ok(ModularSide {
        proportional,
        mu: proportional.then(|| mu.to_string()),
        mu_value: proportional.then_some(mu),
        residual: diff.max_abs(),
    })
}

fn normalize_columns(p: &Mat) -> Result<Mat> {
    let n = p.n();
    let mut scales = Vec::with_capacity(n);
    for j in 0..n {
        let norm2: Scalar = p.column(j).iter().map(|x| x * &x.conj()).sum();
        let norm = norm2.sqrt();
        let norm = if p.is_exact() && norm.is_exact() { norm } else { norm.to_approx() };
        scales.push(norm.inv().ok_or(Error::Singular)?);
    }
    Ok(Mat::from_fn(n, |i, j| p.get(i, j) * &scales[j]))
}

/// (PT)³ = μI with μ ≠ 0, for the raw and the column-normalised P.
pub fn modular_invariance_check(
    p: &Mat,
    t: &Mat,
    model: Option<&SpinModelData>,
    settings: &Settings,
) -> Result<ModularReport> {
    require_square_same(p, t)?;
    if !t.is_diagonal(settings.eps) {
        return Err(Error::Precondition("T must be diagonal".into()));
    }
    let raw = modular_side(p, t, settings.eps)?;
    let column_normalized = match normalize_columns(p) {
        Ok(pn) => modular_side(&pn, t, settings.eps)?,
        Err(_) => ModularSide {
            proportional: false,
            mu: None,
            mu_value: None,
            residual: f64::NAN,
        },
    };
    let expected = model.and_then(|m| Some(&m.loop_scalar.pow(3)? * &m.a.inv()?));
    let raw_matches_expected = expected.as_ref().map(|e| match &raw.mu_value {
        Some(mu) => mu.eq_tol(e, settings.eps),
        None => false,
    });
    Ok(ModularReport {
        raw,
        column_normalized,
        expected,
        raw_matches_expected,
    })
}

/// Triple-intersection patterns of a scheme: for each distinct combination of
/// (class(a,b), class(x,a), class(x,b)) and counts #{y : (a,y)∈R_i, (b,y)∈R_j, (x,y)∈R_k}.
#[derive(Debug, Clone)]
pub struct TripleStructure {
    m: usize,
    n: usize,
    patterns: Vec<((usize, usize, usize), Vec<u32>)>,
    p: Vec<Vec<Vec<i64>>>,
    transpose: Vec<usize>,
}

impl TripleStructure {
    pub fn new(s: &AssociationScheme) -> TripleStructure {
        let n = s.n();
        let m = s.d() + 1;
        let mut seen: BTreeMap<((usize, usize, usize), Vec<u32>), ()> = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    let mut counts = vec![0u32; m * m * m];
                    for y in 0..n {
                        counts[(s.label(a, y) * m + s.label(b, y)) * m + s.label(x, y)] += 1;
                    }
                    seen.insert(((s.label(a, b), s.label(x, a), s.label(x, b)), counts), ());
                }
            }
        }
        TripleStructure {
            m,
            n,
            patterns: seen.into_keys().collect(),
            p: s.intersection_numbers().clone(),
            transpose: (0..m).map(|j| s.transpose_index(j)).collect(),
        }
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// Complex residuals of the type-II and type-III conditions for W = Σ t_i A_i.
    pub fn residuals(&self, t: &[Complex64], d: f64) -> Vec<Complex64> {
        let m = self.m;
        let inv: Vec<Complex64> = t.iter().map(|z| 1.0 / z).collect();
        let mut out = Vec::with_capacity(self.patterns.len() + m);
        for ((rab, rxa, rxb), counts) in &self.patterns {
            let mut lhs = Complex64::new(0.0, 0.0);
            for i in 0..m {
                for j in 0..m {
                    let tij = t[i] * t[j];
                    for k in 0..m {
                        let c = counts[(i * m + j) * m + k];
                        if c != 0 {
                            lhs += tij * inv[k] * c as f64;
                        }
                    }
                }
            }
            let rhs = t[*rab] * inv[*rxa] * inv[*rxb] * d;
            out.push(lhs - rhs);
        }
        // W (W⁽⁻⁾)ᵀ = Σ_ij t_i/t_j A_i A_j' must equal n·A_0
        for k in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                for j in 0..m {
                    acc += t[i] * inv[j] * self.p[k][i][self.transpose[j]] as f64;
                }
            }
            if k == 0 {
                acc -= self.n as f64;
            }
            out.push(acc);
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIIISearchReport {
    pub starts: usize,
    pub d_values: Vec<f64>,
    /// Converged coefficient vectors (deduplicated), as (re, im) pairs.
    pub solutions: Vec<Vec<(f64, f64)>>,
    pub distinct_solutions: Vec<Vec<(f64, f64)>>,
    pub best_residual: f64,
    pub tolerance: f64,
}

fn levenberg_marquardt(ts: &TripleStructure, d: f64, start: Vec<f64>) -> (Vec<f64>, f64) {
    let m = ts.m;
    let to_c = |x: &[f64]| -> Vec<Complex64> { (0..m).map(|i| Complex64::new(x[i], x[m + i])).collect() };
    let flat = |r: Vec<Complex64>| -> Vec<f64> { r.iter().flat_map(|z| [z.re, z.im]).collect() };
    let eval = |x: &[f64]| -> Vec<f64> {
        let t = to_c(x);
        if t.iter().any(|z| z.norm() < 1e-12) {
            return vec![1e6; 2 * (ts.patterns.len() + m)];
        }
        flat(ts.residuals(&t, d))
    };
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = start;
    let mut r = eval(&x);
    let mut cost = norm(&r);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let k = x.len();
        let mut jac = DMatrix::<f64>::zeros(r.len(), k);
        for c in 0..k {
            let h = 1e-7 * (1.0 + x[c].abs());
            let mut xp = x.clone();
            xp[c] += h;
            let rp = eval(&xp);
            for (row, (a, b)) in rp.iter().zip(&r).enumerate() {
                jac[(row, c)] = (a - b) / h;
            }
        }
        let rv = DVector::from_vec(r.clone());
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * rv;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..k {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rn = eval(&xn);
            let cn = norm(&rn);
            if cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved || cost < 1e-26 {
            break;
        }
    }
    (x, cost.sqrt())
}

/// Numerical search for coefficient vectors t making Σ t_i A_i type II and type III,
/// for both signs of D. Solutions with pairwise distinct t_i are reported separately.
pub fn search_type_iii(s: &AssociationScheme, starts: usize, settings: &Settings) -> TypeIIISearchReport {
    let ts = TripleStructure::new(s);
    let m = ts.m;
    let root = (s.n() as f64).sqrt();
    let tolerance = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut solutions: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut best = f64::INFINITY;
    for d in [root, -root] {
        for _ in 0..starts {
            let start: Vec<f64> = (0..2 * m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (x, res) = levenberg_marquardt(&ts, d, start);
            best = best.min(res);
            if res < tolerance {
                let key: Vec<(f64, f64)> = (0..m)
                    .map(|i| ((x[i] * 1e6).round() / 1e6, (x[m + i] * 1e6).round() / 1e6))
                    .collect();
                if !solutions.iter().any(|s| close(s, &key)) {
                    solutions.push(key);
                }
            }
        }
    }
    solutions.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let distinct_solutions = solutions
        .iter()
        .filter(|t| {
            (0..t.len()).all(|i| {
                (i + 1..t.len()).all(|j| {
                    let (a, b) = (t[i], t[j]);
                    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() > 1e-4
                })
            })
        })
        .cloned()
        .collect();
    TypeIIISearchReport {
        starts,
        d_values: vec![root, -root],
        solutions,
        distinct_solutions,
        best_residual: best,
        tolerance,
    }
}

fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() < 1e-4 && (x.1 - y.1).abs() < 1e-4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{cyclic_table, group_scheme};

    fn w1() -> Mat {
        Mat::from_ints(&[&[1, 1], &[1, -1]])
    }

    fn w2() -> Mat {
        let w = Scalar::zeta(3, 1);
        let o = Scalar::one();
        Mat::from_rows(&[
            vec![o.clone(), w.clone(), o.clone()],
            vec![w.clone(), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), w.clone()],
        ])
        .unwrap()
    }

    #[test]
    fn w1_and_w2_are_type_ii() {
        let s = Settings::default();
        assert!(is_type_ii(&w1(), &s).unwrap().holds);
        let r = is_type_ii(&w2(), &s).unwrap();
        assert!(r.holds);
        assert_eq!(r.residual, 0.0);
        assert!(!is_type_ii(&Mat::ones(3), &s).unwrap().holds);
    }

    #[test]
    fn w2_schur_inverse_is_conjugate() {
        let inv = w2().schur_inverse().unwrap();
        assert_eq!(inv, w2().conj_transpose().transpose());
        assert_eq!(w2().schur_product(&inv).unwrap(), Mat::ones(3));
    }

    #[test]
    fn w1_is_not_type_iii() {
        // a = b = x = 0: left side 1 + 1 = 2, right side ±√2.
        let r = is_type_iii(&w1(), &Settings::default()).unwrap();
        assert!(!r.holds);
        assert!(r.plus.residual > 0.5 && r.minus.residual > 0.5);
    }

    #[test]
    fn type_iii_precondition() {
        assert!(matches!(is_type_iii(&Mat::ones(2), &Settings::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn nomura_of_w2_is_the_z3_scheme() {
        let r = nomura_algebra(&w2(), &Settings::default()).unwrap();
        assert_eq!(r.dimension, 3);
        assert!(r.contains_identity && r.contains_ones);
        assert!(r.closed_under_product && r.closed_under_schur);
        let z3 = group_scheme(&cyclic_table(3), &Settings::default()).unwrap();
        assert!(crate::exactalg::linalg::same_span(&r.basis, &z3.classes(), 1e-9));
    }

    #[test]
    fn nomura_needs_schur_invertible() {
        assert!(matches!(nomura_algebra(&Mat::identity(2), &Settings::default()), Err(Error::SchurSingular { .. })));
    }

    #[test]
    fn potts_three() {
        let r = potts_spin_model(3, &Settings::default()).unwrap();
        assert_eq!(r.solutions.len(), 2);
        for sol in &r.solutions {
            assert!(sol.exact);
            assert_eq!(&sol.t + &sol.t.inv().unwrap(), Scalar::one());
            assert!(sol.type_ii.holds);
            assert_eq!(sol.type_ii.residual, 0.0);
            assert_eq!(sol.type_iii.sign, Some(1));
            assert!(sol.distinct);
        }
        let t = &r.solutions[0].t;
        let c = &r.solutions[0].c;
        assert_eq!(t, &Scalar::zeta(6, 1));
        assert_eq!(c * c, Scalar::zeta(4, 1));
    }

    #[test]
    fn potts_two_and_four() {
        let r = potts_spin_model(2, &Settings::default()).unwrap();
        let mut ts: Vec<Scalar> = r.solutions.iter().map(|s| s.t.clone()).collect();
        ts.sort_by(|a, b| a.to_complex().im.total_cmp(&b.to_complex().im));
        assert_eq!(ts, vec![Scalar::zeta(4, 3), Scalar::zeta(4, 1)]);
        assert!(r.solutions.iter().all(|s| s.type_ii.holds));
        let r = potts_spin_model(4, &Settings::default()).unwrap();
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].t, Scalar::one());
        assert!(r.solutions[0].distinct);
    }

    #[test]
    fn potts_five_falls_back_to_approx() {
        let r = potts_spin_model(5, &Settings::default()).unwrap();
        assert!(r.solutions.iter().all(|s| !s.exact && s.type_ii.holds));
    }

    #[test]
    fn potts_parameters_and_modular_invariance() {
        let s = Settings::default();
        let sol = &potts_spin_model(3, &s).unwrap().solutions[0];
        let model = sol.model.as_ref().unwrap();
        // a⁻¹ = t_0 = c
        assert_eq!(model.a.inv().unwrap(), sol.c);
        let p = Mat::from_ints(&[&[1, 2], &[1, -1]]);
        let rep = modular_invariance_check(&p, &model.t_diag, Some(model), &s).unwrap();
        assert!(rep.raw.proportional);
        assert_eq!(rep.raw_matches_expected, Some(true));
    }

    #[test]
    fn modular_trivial_and_degenerate() {
        let s = Settings::default();
        let r = modular_invariance_check(&Mat::identity(2), &Mat::identity(2), None, &s).unwrap();
        assert!(r.raw.proportional);
        assert_eq!(r.raw.mu_value, Some(Scalar::one()));
        let p = Mat::from_ints(&[&[1, 0], &[1, 0]]);
        let r = modular_invariance_check(&p, &Mat::identity(2), None, &s).unwrap();
        assert!(!r.raw.proportional);
    }

    #[test]
    fn constant_coefficients_rejected() {
        let s = Settings::default();
        let sch = trivial_scheme(3, &s).unwrap();
        let r = spin_model_from_scheme(&sch, &[Scalar::one(), Scalar::one()], &s);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn triple_structure_agrees_with_matrix_check() {
        let s = Settings::default();
        let sch = trivial_scheme(3, &s).unwrap();
        let sol = &potts_spin_model(3, &s).unwrap().solutions[0];
        let t: Vec<Complex64> = vec![sol.c.to_complex(), (-(&sol.c * &sol.t)).to_complex()];
        let ts = TripleStructure::new(&sch);
        let worst = ts.residuals(&t, 3f64.sqrt()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12);
    }
}
