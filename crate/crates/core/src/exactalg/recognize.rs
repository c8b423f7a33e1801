//! Recognising a floating-point complex number as an element of Z[ζ_M].
//!
//! Numeric eigenvalues of integral matrices are algebraic integers; for the
//! matrices handled here they lie in a cyclotomic field. A small LLL reduction
//! finds integer coefficients c_j with Σ c_j ζ_M^j ≈ z; callers verify the
//! candidate exactly afterwards, so a wrong guess can never leak out.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::cyclo::{euler_phi, lcm_u32, Cyclo};

const SCALE: f64 = 1e9;
const MAX_RECOGNITION_PHI: usize = 32;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Textbook LLL with δ = 0.99 on the rows of `basis`, in place.
fn lll(basis: &mut [Vec<f64>]) {
    let k_max = basis.len();
    if k_max < 2 {
        return;
    }
    let delta = 0.99;
    let gram_schmidt = |b: &[Vec<f64>]| -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
        let m = b.len();
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut mu = vec![vec![0.0; m]; m];
        let mut norms = vec![0.0; m];
        for i in 0..m {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = if norms[j] > 0.0 { dot(&b[i], &star[j]) / norms[j] } else { 0.0 };
                for (x, s) in v.iter_mut().zip(&star[j]) {
                    *x -= mu[i][j] * s;
                }
            }
            norms[i] = dot(&v, &v);
            star.push(v);
        }
        (star, mu, norms)
    };
    let (_, mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < k_max && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let (lo, hi) = basis.split_at_mut(k);
                for (x, y) in hi[0].iter_mut().zip(&lo[j]) {
                    *x -= q * y;
                }
                let (_, m2, n2) = gram_schmidt(basis);
                mu = m2;
                norms = n2;
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (_, m2, n2) = gram_schmidt(basis);
            mu = m2;
            norms = n2;
            k = k.max(2) - 1;
        }
    }
}

/// Tries to write `z` as Σ c_j ζ_order^j with small integers c_j.
pub fn recognize_in_order(z: Complex64, order: u32) -> Option<Cyclo> {
    let phi = euler_phi(order);
    if phi > MAX_RECOGNITION_PHI {
        return None;
    }
    let roots: Vec<Complex64> = (0..phi)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / order as f64))
        .collect();
    // Rounding shortcut for rational integers and Gaussian-like cases.
    if phi == 1 && (z.re - z.re.round()).abs() < 1e-7 && z.im.abs() < 1e-7 {
        return Some(Cyclo::from_int(z.re.round() as i64));
    }
    let dim = phi + 3;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(phi + 1);
    for (j, r) in roots.iter().enumerate() {
        let mut row = vec![0.0; dim];
        row[j] = 1.0;
        row[phi + 1] = SCALE * r.re;
        row[phi + 2] = SCALE * r.im;
        basis.push(row);
    }
    let mut target = vec![0.0; dim];
    target[phi] = 1.0;
    target[phi + 1] = -SCALE * z.re;
    target[phi + 2] = -SCALE * z.im;
    basis.push(target);
    lll(&mut basis);
    for row in &basis {
        let t = row[phi];
        if t.abs() != 1.0 {
            continue;
        }
        let coeffs: Vec<f64> = row[..phi].iter().map(|c| c * t).collect();
        if coeffs.iter().any(|c| (c - c.round()).abs() > 1e-6 || c.abs() > 1e6) {
            continue;
        }
        let approx: Complex64 = coeffs.iter().zip(&roots).map(|(c, r)| r * c.round()).sum();
        if (approx - z).norm() > 1e-6 * (1.0 + z.norm()) {
            continue;
        }
        let rat: Vec<BigRational> = coeffs
            .iter()
            .map(|c| BigRational::from_integer(BigInt::from(c.round() as i64)))
            .collect();
        return Cyclo::from_power_coeffs(order, &rat).ok();
    }
    None
}

/// Candidate orders lcm(base, m), smallest field degree first.
pub fn candidate_orders(base: u32) -> Vec<u32> {
    let mut orders: Vec<u32> = (1..=60u32)
        .map(|m| lcm_u32(base.max(1), m))
        .filter(|&o| euler_phi(o) <= MAX_RECOGNITION_PHI)
        .collect();
    orders.sort_by_key(|&o| (euler_phi(o), o));
    orders.dedup();
    orders
}

/// Recognises `z` in the smallest cyclotomic field extending Q(ζ_base) that works.
pub fn recognize(z: Complex64, base: u32) -> Option<Cyclo> {
    candidate_orders(base)
        .into_iter()
        .find_map(|order| recognize_in_order(z, order))
}
