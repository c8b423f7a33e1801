//! Leonard pairs, the Krawtchouk algebra relations, the map from U(sl2), and
//! q-Krawtchouk spectra at roots of unity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::nullspace;
use crate::exactalg::recognize::recognize;
use crate::exactalg::spectral::{cluster, common_denominator, numeric_eigenvalues, to_dmatrix};
use crate::exactalg::scalar::rational_to_f64;
use crate::exactalg::{Mat, Rational, Scalar};
use crate::ifs::{build_ifs, sl2_check, InteractingFockSpace, JacobiCoefficients};
use crate::settings::{Mode, Settings};

#[derive(Debug, Clone)]
pub struct LeonardPairCandidate {
    pub a: Mat,
    pub b: Mat,
}

impl LeonardPairCandidate {
    pub fn new(a: Mat, b: Mat) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::Dimension(format!("A is {0}x{0}, B is {1}x{1}", a.n(), b.n())));
        }
        Ok(LeonardPairCandidate { a, b })
    }

    pub fn dimension(&self) -> usize {
        self.a.n()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// One of the matrices has a repeated eigenvalue.
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Order of the eigenvectors (indices into `eigenvalues`) making the other matrix tridiagonal.
    pub ordering: Option<Vec<usize>>,
    pub eigenvalues: Vec<String>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeonardReport {
    pub verdict: Verdict,
    /// A is irreducible tridiagonal in an eigenbasis of B.
    pub condition_i: ConditionReport,
    /// B is irreducible tridiagonal in an eigenbasis of A.
    pub condition_ii: ConditionReport,
}

/// Eigenvalues and eigenvectors of a matrix with simple spectrum; `None` when degenerate.
fn simple_eigenbasis(m: &Mat, settings: &Settings) -> Result<Option<(Vec<Scalar>, Vec<Vec<Scalar>>)>> {
    let n = m.n();
    if m.is_diagonal(0.0) {
        let values = m.diagonal();
        let distinct = (0..n).all(|i| (i + 1..n).all(|j| !values[i].eq_tol(&values[j], 1e-12)));
        if !distinct {
            return Ok(None);
        }
        let vectors = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        return Ok(Some((values, vectors)));
    }
    let raw = numeric_eigenvalues(&to_dmatrix(m))?;
    let scale = m.max_abs().max(1.0);
    let tol = 1e-6 * scale;
    let clusters = cluster(&raw, tol);
    if clusters.len() < n {
        return Ok(None);
    }
    let exact = settings.mode == Mode::Exact && m.is_exact();
    let base = m.order().unwrap_or(1);
    let den = rational_to_f64(&Rational::from_integer(common_denominator(m)));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for z in clusters {
        let candidate = if exact { recognize(z * den, base).map(|c| Scalar::Exact(c).scale_rational(&Rational::new(1.into(), common_denominator(m)))) } else { None };
        let (theta, work) = match candidate {
            Some(t) => (t, m.clone()),
            None => (Scalar::approx(z.re, z.im), m.to_approx()),
        };
        let shifted = work.sub(&Mat::identity(n).scale(&theta))?;
        let rows: Vec<Vec<Scalar>> = (0..n).map(|r| shifted.row(r).to_vec()).collect();
        let eps = if theta.is_exact() { 0.0 } else { 1e-7 * scale };
        let mut null = nullspace(&rows, n, eps);
        if null.len() != 1 && theta.is_exact() {
            // recognition landed on a wrong value: redo numerically
            let approx = m.to_approx().sub(&Mat::identity(n).scale(&Scalar::approx(z.re, z.im)))?;
            let rows: Vec<Vec<Scalar>> = (0..n).map(|r| approx.row(r).to_vec()).collect();
            null = nullspace(&rows, n, 1e-7 * scale);
            values.push(Scalar::approx(z.re, z.im));
        } else {
            values.push(theta);
        }
        match null.into_iter().next() {
            Some(v) => vectors.push(v),
            None => return Err(Error::Splitting("eigenvector not found".into())),
        }
    }
    Ok(Some((values, vectors)))
}

/// Looks for an ordering of the basis in which `m` is irreducible tridiagonal:
/// the off-diagonal support must be a Hamiltonian path with both directions nonzero.
fn tridiagonal_ordering(m: &Mat, eps: f64) -> std::result::Result<Vec<usize>, String> {
    let n = m.n();
    if n == 1 {
        return Ok(vec![0]);
    }
    let nz = |i: usize, j: usize| !m.get(i, j).is_zero_tol(eps);
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && (nz(i, j) || nz(j, i)) {
                if !(nz(i, j) && nz(j, i)) {
                    return Err(format!("entry ({i},{j}) is nonzero in one direction only"));
                }
                if i < j {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() > 2) {
        return Err(format!("basis vector {v} couples to {} others", adj[v].len()));
    }
    let Some(start) = (0..n).find(|&v| adj[v].len() == 1) else {
        return Err("off-diagonal support has no path endpoint".into());
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != n {
        return Err("off-diagonal support is disconnected".into());
    }
    Ok(order)
}

fn condition(diagonalised: &Mat, other: &Mat, settings: &Settings) -> Result<ConditionReport> {
    let Some((values, vectors)) = simple_eigenbasis(diagonalised, settings)? else {
        return Ok(ConditionReport {
            verdict: Verdict::Degenerate,
            ordering: None,
            eigenvalues: Vec::new(),
            reason: Some("repeated eigenvalue".into()),
        });
    };
    let n = diagonalised.n();
    let v = Mat::from_fn(n, |r, c| vectors[c][r].clone());
    let transformed = v.inverse()?.mul(other)?.mul(&v)?;
    let eps = if transformed.is_exact() { 0.0 } else { settings.eps.max(1e-8) * other.max_abs().max(1.0) };
    let eigenvalues = values.iter().map(|x| x.to_string()).collect();
    Ok(match tridiagonal_ordering(&transformed, eps) {
        Ok(order) => ConditionReport {
            verdict: Verdict::Holds,
            ordering: Some(order),
            eigenvalues,
            reason: None,
        },
        Err(reason) => ConditionReport {
            verdict: Verdict::Fails,
            ordering: None,
            eigenvalues,
            reason: Some(reason),
        },
    })
}

/// Checks both Leonard conditions, reporting degeneracy instead of a verdict when a spectrum repeats.
pub fn is_leonard_pair(c: &LeonardPairCandidate, settings: &Settings) -> Result<LeonardReport> {
    let condition_i = condition(&c.b, &c.a, settings)?;
    let condition_ii = condition(&c.a, &c.b, settings)?;
    let verdict = match (condition_i.verdict, condition_ii.verdict) {
        (Verdict::Degenerate, _) | (_, Verdict::Degenerate) => Verdict::Degenerate,
        (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        _ => Verdict::Fails,
    };
    Ok(LeonardReport {
        verdict,
        condition_i,
        condition_ii,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KrawtchoukReport {
    /// max |A²B − 2ABA + BA² − B − ωA|
    pub cubic_a: f64,
    /// max |B²A − 2BAB + AB² − A − ωB|
    pub cubic_b: f64,
    /// max |[A,C] − B − ωA| with C = [A,B]
    pub presentation_ac: f64,
    /// max |[C,B] − A − ωB|
    pub presentation_cb: f64,
    /// Both presentations give identical residual matrices.
    pub presentations_agree: bool,
    pub exact: bool,
}

impl KrawtchoukReport {
    pub fn max_residual(&self) -> f64 {
        [self.cubic_a, self.cubic_b, self.presentation_ac, self.presentation_cb]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn krawtchouk_relations(a: &Mat, b: &Mat, omega: &Scalar) -> Result<KrawtchoukReport> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("A is {0}x{0}, B is {1}x{1}", a.n(), b.n())));
    }
    let two = Scalar::int(2);
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    let aa = a.mul(a)?;
    let bb = b.mul(b)?;
    let r1 = aa
        .mul(b)?
        .sub(&ab.mul(a)?.scale(&two))?
        .add(&b.mul(&aa)?)?
        .sub(b)?
        .sub(&a.scale(omega))?;
    let r2 = bb
        .mul(a)?
        .sub(&ba.mul(b)?.scale(&two))?
        .add(&a.mul(&bb)?)?
        .sub(a)?
        .sub(&b.scale(omega))?;
    let c = ab.sub(&ba)?;
    let p1 = a.commutator(&c)?.sub(b)?.sub(&a.scale(omega))?;
    let p2 = c.commutator(b)?.sub(a)?.sub(&b.scale(omega))?;
    let eps = if r1.is_exact() && p1.is_exact() { 0.0 } else { 1e-9 };
    Ok(KrawtchoukReport {
        cubic_a: r1.max_abs(),
        cubic_b: r2.max_abs(),
        presentation_ac: p1.max_abs(),
        presentation_cb: p2.max_abs(),
        presentations_agree: r1.eq_tol(&p1, eps) && r2.eq_tol(&p2, eps),
        exact: r1.is_exact() && r2.is_exact() && p1.is_exact() && p2.is_exact(),
    })
}

#[derive(Debug, Clone)]
pub struct KrawtchoukTriple {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
}

/// Images of the Krawtchouk generators in an sl2 module:
/// A = ((1+ω)/2)B⁺ + ((1−ω)/2)B⁻ − (ω/2)H, B = H/2, C = [A,B] = −((1+ω)/2)B⁺ + ((1−ω)/2)B⁻.
///
/// Built from the monic-gauge ladder so the entries stay rational for any d.
pub fn ksl2_substitution(f: &InteractingFockSpace, omega: &Scalar) -> Result<KrawtchoukTriple> {
    let one = Scalar::one();
    if (omega * omega).eq_tol(&one, 0.0) || (!omega.is_exact() && (omega * omega).eq_tol(&one, 1e-12)) {
        return Err(Error::Precondition("omega^2 = 1 is excluded".into()));
    }
    let report = sl2_check(f)?;
    let worst = [report.residual_plus, report.residual_minus, report.residual_bracket]
        .into_iter()
        .fold(0.0, f64::max);
    if worst > 1e-12 {
        return Err(Error::Precondition(format!("ladder is not an sl2 module (residual {worst:e})")));
    }
    let (bp, bm) = f.monic_ladder();
    let h = bp.commutator(&bm)?;
    let half = Scalar::ratio(1, 2);
    let p = &(&one + omega) * &half;
    let m = &(&one - omega) * &half;
    let w2 = omega * &half;
    let a = bp.scale(&p).add(&bm.scale(&m))?.sub(&h.scale(&w2))?;
    let b = h.scale(&half);
    let c = bm.scale(&m).sub(&bp.scale(&p))?;
    Ok(KrawtchoukTriple { a, b, c })
}

#[derive(Debug, Clone)]
pub struct QData {
    pub k: usize,
    pub d: usize,
    pub q: Scalar,
    pub epsilon: Scalar,
    pub theta: Vec<Scalar>,
}

/// θ_i = ε q^{d−2i}/(q − q⁻¹) with q = ζ_{k+2}; all θ_i must be distinct and d odd.
pub fn anyon_qdata(k: usize, d: usize, epsilon: &Scalar) -> Result<QData> {
    if epsilon.is_zero_tol(0.0) {
        return Err(Error::Domain("epsilon must be nonzero".into()));
    }
    let order = u32::try_from(k + 2).map_err(|_| Error::Domain("level too large".into()))?;
    let q = Scalar::zeta(order, 1);
    let qinv = Scalar::zeta(order, -1);
    let denom = (&q - &qinv)
        .inv()
        .ok_or_else(|| Error::Domain(format!("q - 1/q vanishes at level {k}")))?;
    let scale = epsilon * &denom;
    let theta: Vec<Scalar> = (0..=d)
        .map(|i| &scale * &Scalar::zeta(order, d as i64 - 2 * i as i64))
        .collect();
    let exact = theta.iter().all(Scalar::is_exact);
    let eps = if exact { 0.0 } else { 1e-12 };
    for i in 0..=d {
        for j in i + 1..=d {
            if theta[i].eq_tol(&theta[j], eps) {
                return Err(Error::Admissibility(i, j));
            }
        }
    }
    if d % 2 == 0 {
        return Err(Error::Domain(format!("d = {d} must be odd")));
    }
    Ok(QData {
        k,
        d,
        q,
        epsilon: epsilon.clone(),
        theta,
    })
}

#[derive(Debug, Clone)]
pub struct QLeonard {
    pub candidate: LeonardPairCandidate,
    pub report: LeonardReport,
}

/// B = diag(θ_0..θ_d) against the symmetric sl2 ladder A = B⁺ + B⁻ of the same dimension.
pub fn leonard_from_qdata(qd: &QData, settings: &Settings) -> Result<QLeonard> {
    let recheck = anyon_qdata(qd.k, qd.d, &qd.epsilon)?;
    if recheck.theta.len() != qd.theta.len() {
        return Err(Error::Precondition("QData theta list does not match d".into()));
    }
    let ladder = build_ifs(&JacobiCoefficients::hamming_ladder(qd.d))?;
    let a = ladder.bplus.add(&ladder.bminus)?;
    let b = Mat::diag(&qd.theta);
    let candidate = LeonardPairCandidate::new(a, b)?;
    let report = is_leonard_pair(&candidate, settings)?;
    Ok(QLeonard { candidate, report })
}

/// The 4×4 example pair: a Krawtchouk tridiagonal matrix and diag(3, 1, −1, −3).
pub fn example_pair() -> LeonardPairCandidate {
    LeonardPairCandidate {
        a: Mat::from_ints(&[&[0, 3, 0, 0], &[1, 0, 2, 0], &[0, 2, 0, 1], &[0, 0, 3, 0]]),
        b: Mat::diag(&[Scalar::int(3), Scalar::int(1), Scalar::int(-1), Scalar::int(-3)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> Settings {
        Settings::default()
    }

    #[test]
    fn example_pair_is_leonard() {
        let r = is_leonard_pair(&example_pair(), &settings()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.condition_i.verdict, Verdict::Holds);
        assert_eq!(r.condition_ii.verdict, Verdict::Holds);
    }

    #[test]
    fn swapping_exchanges_conditions() {
        let p = example_pair();
        let swapped = LeonardPairCandidate::new(p.b.clone(), p.a.clone()).unwrap();
        let r = is_leonard_pair(&p, &settings()).unwrap();
        let s = is_leonard_pair(&swapped, &settings()).unwrap();
        assert_eq!(r.condition_i.verdict, s.condition_ii.verdict);
        assert_eq!(r.condition_ii.verdict, s.condition_i.verdict);
        assert_eq!(s.verdict, Verdict::Holds);
    }

    #[test]
    fn diagonal_pair_fails() {
        let d = Mat::diag(&[Scalar::int(1), Scalar::int(2)]);
        let r = is_leonard_pair(&LeonardPairCandidate::new(d.clone(), d).unwrap(), &settings()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
    }

    #[test]
    fn repeated_eigenvalue_is_degenerate() {
        let b = Mat::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1), Scalar::int(-3)]);
        let c = LeonardPairCandidate::new(example_pair().a, b).unwrap();
        assert_eq!(is_leonard_pair(&c, &settings()).unwrap().verdict, Verdict::Degenerate);
    }

    #[test]
    fn approx_mode_agrees() {
        let s = Settings {
            mode: Mode::Approx,
            ..Settings::default()
        };
        assert_eq!(is_leonard_pair(&example_pair(), &s).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn substitution_small_ladders() {
        for (d, w) in [(1usize, Scalar::ratio(1, 2)), (3, Scalar::ratio(1, 3))] {
            let f = build_ifs(&JacobiCoefficients::hamming_ladder(d)).unwrap();
            let t = ksl2_substitution(&f, &w).unwrap();
            assert_eq!(t.a.n(), d + 1);
            let r = krawtchouk_relations(&t.a, &t.b, &w).unwrap();
            assert_eq!(r.max_residual(), 0.0);
            assert!(r.presentations_agree && r.exact);
            assert_eq!(t.a.commutator(&t.b).unwrap(), t.c);
        }
    }

    #[test]
    fn omega_one_rejected() {
        let f = build_ifs(&JacobiCoefficients::hamming_ladder(2)).unwrap();
        assert!(matches!(ksl2_substitution(&f, &Scalar::one()), Err(Error::Precondition(_))));
        assert!(matches!(ksl2_substitution(&f, &Scalar::int(-1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_pair_trivially_satisfies() {
        let z = Mat::zeros(3);
        let r = krawtchouk_relations(&z, &z, &Scalar::zero()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn random_pair_fails_relations() {
        let a = Mat::from_ints(&[&[1, 2, 0], &[0, 3, 1], &[4, 0, 1]]);
        let b = Mat::from_ints(&[&[0, 1, 1], &[2, 0, 0], &[1, 1, 5]]);
        let r = krawtchouk_relations(&a, &b, &Scalar::ratio(1, 2)).unwrap();
        assert!(r.cubic_a > 0.0 && r.cubic_b > 0.0);
        assert!(r.presentations_agree);
    }

    #[test]
    fn ising_qdata() {
        let qd = anyon_qdata(2, 1, &Scalar::one()).unwrap();
        assert_eq!(qd.theta, vec![Scalar::ratio(1, 2), Scalar::ratio(-1, 2)]);
    }

    #[test]
    fn fibonacci_qdata_distinct() {
        let qd = anyon_qdata(3, 3, &Scalar::one()).unwrap();
        assert_eq!(qd.theta.len(), 4);
        let expect = |e: i64| {
            let q = Scalar::zeta(5, 1);
            Scalar::zeta(5, e).div(&(&q - &Scalar::zeta(5, -1))).unwrap()
        };
        assert_eq!(qd.theta, vec![expect(3), expect(1), expect(-1), expect(-3)]);
    }

    #[test]
    fn even_d_collides() {
        assert_eq!(anyon_qdata(2, 4, &Scalar::one()).unwrap_err(), Error::Admissibility(0, 2));
        assert!(anyon_qdata(2, 1, &Scalar::zero()).is_err());
    }

    #[test]
    fn qdata_pair_small() {
        let qd = anyon_qdata(2, 1, &Scalar::one()).unwrap();
        let l = leonard_from_qdata(&qd, &settings()).unwrap();
        assert_eq!(l.report.verdict, Verdict::Holds);
    }

    #[test]
    fn fibonacci_pair_against_sl2_ladder() {
        // the ladder is tridiagonal against diag(θ), but a geometric θ is not
        // tridiagonal in the ladder's eigenbasis
        let qd = anyon_qdata(3, 3, &Scalar::one()).unwrap();
        let l = leonard_from_qdata(&qd, &settings()).unwrap();
        assert_eq!(l.report.condition_i.verdict, Verdict::Holds);
        assert_eq!(l.report.condition_i.ordering, Some(vec![0, 1, 2, 3]));
        assert_eq!(l.report.condition_ii.verdict, Verdict::Fails);
        assert!(l.candidate.b.is_exact());
    }

    #[test]
    fn eigenvalues_with_denominators_recognised() {
        let a = Mat::from_rows(&[
            vec![Scalar::ratio(1, 3), Scalar::ratio(1, 3)],
            vec![Scalar::ratio(1, 3), Scalar::ratio(-1, 3)],
        ])
        .unwrap();
        let (vals, _) = simple_eigenbasis(&a, &settings()).unwrap().unwrap();
        assert!(vals.iter().all(Scalar::is_exact));
    }
}
