//! Simultaneous eigenspace decomposition of commuting normal matrices.
//!
//! A random integer combination G = Σ r_i A_i separates the joint eigenspaces
//! with probability one. Its spectrum is computed numerically, clustered, and
//! the per-input eigenvalues on each cluster are read off. In exact mode these
//! are recognised as cyclotomic integers and the idempotents are rebuilt by
//! exact Lagrange interpolation in G, then verified exactly.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cyclo::Rational;
use super::mat::Mat;
use super::recognize::recognize;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::settings::Settings;

const MAX_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone)]
pub struct Eigenspaces {
    /// Primitive idempotents E_j, with J/n first when it occurs.
    pub projections: Vec<Mat>,
    /// `eigenvalues[j][i]` is the eigenvalue of input i on the range of E_j.
    pub eigenvalues: Vec<Vec<Scalar>>,
    pub ranks: Vec<usize>,
    /// Coefficients of the separating combination that succeeded.
    pub combination: Vec<i64>,
}

pub(crate) fn to_dmatrix(m: &Mat) -> DMatrix<Complex64> {
    let n = m.n();
    DMatrix::from_row_slice(n, n, &m.to_complex_vec())
}

pub(crate) fn numeric_eigenvalues(g: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(g.clone(), 1e-15, 100_000)
        .ok_or_else(|| Error::Splitting("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub(crate) fn cluster(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut means: Vec<(Complex64, usize)> = Vec::new();
    for v in values {
        match means.iter_mut().find(|(m, c)| (*m / *c as f64 - v).norm() < tol) {
            Some((m, c)) => {
                *m += v;
                *c += 1;
            }
            None => means.push((*v, 1)),
        }
    }
    let mut out: Vec<Complex64> = means.into_iter().map(|(m, c)| m / c as f64).collect();
    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    out
}

fn numeric_lagrange(g: &DMatrix<Complex64>, mus: &[Complex64], j: usize) -> DMatrix<Complex64> {
    let n = g.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut e = id.clone();
    for (k, mu) in mus.iter().enumerate() {
        if k != j {
            e = e * (g - &id * *mu) / (mus[j] - mu);
        }
    }
    e
}

fn check_inputs(mats: &[Mat], eps: f64) -> Result<usize> {
    let n = mats
        .first()
        .map(Mat::n)
        .ok_or_else(|| Error::Precondition("no matrices given".into()))?;
    for (i, a) in mats.iter().enumerate() {
        if a.n() != n {
            return Err(Error::Dimension(format!("input {i} has size {} not {n}", a.n())));
        }
        if !a.is_normal(eps)? {
            return Err(Error::NotNormal(i));
        }
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutator(&mats[j])?.is_zero_tol(eps) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(n)
}

pub(crate) fn common_denominator(m: &Mat) -> BigInt {
    m.entries()
        .iter()
        .filter_map(Scalar::as_cyclo)
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denominator()))
}

struct NumericSplit {
    combination: Vec<i64>,
    projections: Vec<DMatrix<Complex64>>,
    eigenvalues: Vec<Vec<Complex64>>,
    ranks: Vec<usize>,
}

fn split_numeric(mats: &[Mat], settings: &Settings) -> Result<NumericSplit> {
    let nums: Vec<DMatrix<Complex64>> = mats.iter().map(to_dmatrix).collect();
    let n = nums[0].nrows();
    let scale = nums.iter().map(|m| m.iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(1.0, f64::max);
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(attempt));
        let combination: Vec<i64> = mats
            .iter()
            .map(|_| {
                let v: i64 = rng.gen_range(1..=9);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for (c, m) in combination.iter().zip(&nums) {
            g += m * Complex64::new(*c as f64, 0.0);
        }
        let spectrum = numeric_eigenvalues(&g)?;
        let tol = 1e-6 * scale * (1 + mats.len()) as f64 * 9.0;
        let mus = cluster(&spectrum, tol);
        let projections: Vec<DMatrix<Complex64>> =
            (0..mus.len()).map(|j| numeric_lagrange(&g, &mus, j)).collect();
        let mut eigenvalues = Vec::with_capacity(mus.len());
        let mut ranks = Vec::with_capacity(mus.len());
        let mut separated = true;
        for e in &projections {
            let tr = e.trace();
            let rank = tr.re.round();
            if rank < 1.0 || (tr - Complex64::new(rank, 0.0)).norm() > 1e-6 {
                separated = false;
                break;
            }
            ranks.push(rank as usize);
            let mut row = Vec::with_capacity(nums.len());
            for a in &nums {
                let ae = a * e;
                let theta = ae.trace() / tr;
                let dev = (&ae - e * theta).iter().map(|z| z.norm()).fold(0.0, f64::max);
                if dev > 1e-6 * scale {
                    separated = false;
                }
                row.push(theta);
            }
            eigenvalues.push(row);
        }
        if separated && ranks.iter().sum::<usize>() == n {
            return Ok(NumericSplit {
                combination,
                projections,
                eigenvalues,
                ranks,
            });
        }
    }
    Err(Error::Splitting(format!(
        "no separating combination found in {MAX_ATTEMPTS} attempts"
    )))
}

fn exact_split(mats: &[Mat], split: &NumericSplit) -> Result<(Vec<Mat>, Vec<Vec<Scalar>>)> {
    let n = mats[0].n();
    let base = mats
        .iter()
        .filter_map(Mat::order)
        .try_fold(1u32, super::cyclo::common_order)
        .ok_or_else(|| Error::Splitting("inputs span too large a cyclotomic field".into()))?;
    let dens: Vec<BigInt> = mats.iter().map(common_denominator).collect();
    let mut eigenvalues: Vec<Vec<Scalar>> = Vec::with_capacity(split.eigenvalues.len());
    for row in &split.eigenvalues {
        let mut exact_row = Vec::with_capacity(row.len());
        for (theta, den) in row.iter().zip(&dens) {
            let scaled = theta * den.to_string().parse::<f64>().unwrap_or(f64::NAN);
            let c = recognize(scaled, base).ok_or_else(|| Error::Recognition {
                value: format!("{theta}"),
            })?;
            exact_row.push(Scalar::Exact(c).scale_rational(&Rational::new(BigInt::one(), den.clone())));
        }
        eigenvalues.push(exact_row);
    }
    let coeffs: Vec<Scalar> = split.combination.iter().map(|&c| Scalar::int(c)).collect();
    let g = Mat::linear_combination(&coeffs, mats)?;
    let lambdas: Vec<Scalar> = eigenvalues
        .iter()
        .map(|row| row.iter().zip(&coeffs).map(|(t, c)| t * c).sum())
        .collect();
    let id = Mat::identity(n);
    let mut projections = Vec::with_capacity(lambdas.len());
    for (j, lj) in lambdas.iter().enumerate() {
        let mut e = id.clone();
        for (k, lk) in lambdas.iter().enumerate() {
            if k == j {
                continue;
            }
            let denom = (lj - lk)
                .inv()
                .ok_or_else(|| Error::Splitting("recognised eigenvalues collide".into()))?;
            let factor = g.sub(&id.scale(lk))?.scale(&denom);
            e = e.mul(&factor)?;
        }
        projections.push(e);
    }
    // Idempotents summing to I that are polynomials in G are automatically
    // orthogonal, so these three checks certify the decomposition.
    let mut sum = Mat::zeros(n);
    for e in &projections {
        if e.is_zero_tol(0.0) || e.mul(e)? != *e {
            return Err(Error::Splitting("interpolated projection is not idempotent".into()));
        }
        sum = sum.add(e)?;
    }
    if sum != id {
        return Err(Error::Splitting("projections do not sum to the identity".into()));
    }
    for (i, a) in mats.iter().enumerate() {
        let thetas: Vec<Scalar> = eigenvalues.iter().map(|row| row[i].clone()).collect();
        if Mat::linear_combination(&thetas, &projections)? != *a {
            return Err(Error::Splitting(format!("input {i} is not recovered from its eigenvalues")));
        }
    }
    Ok((projections, eigenvalues))
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> Mat {
    let n = m.nrows();
    Mat::from_fn(n, |i, j| Scalar::Approx(m[(i, j)]))
}

/// Simultaneous eigenprojections of pairwise commuting normal matrices.
pub fn simultaneous_eigenprojections(mats: &[Mat], settings: &Settings) -> Result<Eigenspaces> {
    let n = check_inputs(mats, settings.eps)?;
    let split = split_numeric(mats, settings)?;
    let exact = mats.iter().all(Mat::is_exact);
    let (mut projections, mut eigenvalues) = if exact {
        exact_split(mats, &split)?
    } else {
        (
            split.projections.iter().map(from_dmatrix).collect(),
            split
                .eigenvalues
                .iter()
                .map(|row| row.iter().map(|z| Scalar::Approx(*z)).collect())
                .collect(),
        )
    };
    let mut ranks = split.ranks.clone();
    let j_over_n = Mat::ones(n).scale(&Scalar::ratio(1, n as i64));
    if let Some(pos) = projections.iter().position(|e| e.eq_tol(&j_over_n, settings.eps)) {
        let e = projections.remove(pos);
        projections.insert(0, e);
        let t = eigenvalues.remove(pos);
        eigenvalues.insert(0, t);
        let r = ranks.remove(pos);
        ranks.insert(0, r);
    }
    Ok(Eigenspaces {
        projections,
        eigenvalues,
        ranks,
        combination: split.combination,
    })
}
