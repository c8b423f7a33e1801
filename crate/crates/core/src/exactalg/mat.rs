use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use super::cyclo::common_order;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::settings::Mode;

/// Dense square matrix whose entries all share one mode.
#[derive(Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    /// Builds a matrix from row-major entries. Exact entries are lifted to a
    /// common cyclotomic order; any approximate entry, or a common field too large to
    /// work in, turns the whole matrix approximate.
    pub fn new(n: usize, data: Vec<Scalar>) -> Result<Mat> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Mat::normalized(n, data))
    }

    fn normalized(n: usize, data: Vec<Scalar>) -> Mat {
        let order = data
            .iter()
            .try_fold(1u32, |acc, s| match s.order() {
                Some(o) => common_order(acc, o),
                None => None,
            });
        let data = if let Some(order) = order {
            data.into_iter().map(|s| s.lift(order)).collect()
        } else {
            data.iter().map(Scalar::to_approx).collect()
        };
        Mat { n, data }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Mat::normalized(n, data)
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Mat> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must form a square matrix".into()));
        }
        Mat::new(n, rows.iter().flatten().cloned().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Mat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Mat::from_fn(n, |i, j| Scalar::int(rows[i][j]))
    }

    pub fn zeros(n: usize) -> Mat {
        Mat::from_fn(n, |_, _| Scalar::zero())
    }

    pub fn identity(n: usize) -> Mat {
        Mat::from_fn(n, |i, j| Scalar::int((i == j) as i64))
    }

    pub fn ones(n: usize) -> Mat {
        Mat::from_fn(n, |_, _| Scalar::one())
    }

    pub fn diag(d: &[Scalar]) -> Mat {
        let n = d.len();
        Mat::from_fn(n, |i, j| if i == j { d[i].clone() } else { Scalar::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_exact(&self) -> bool {
        self.data.first().map_or(true, Scalar::is_exact)
    }

    pub fn mode(&self) -> Mode {
        if self.is_exact() {
            Mode::Exact
        } else {
            Mode::Approx
        }
    }

    /// The common cyclotomic order of an exact matrix.
    pub fn order(&self) -> Option<u32> {
        if self.is_exact() {
            Some(self.data.first().and_then(Scalar::order).unwrap_or(1))
        } else {
            None
        }
    }

    pub fn to_approx(&self) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(Scalar::to_approx).collect(),
        }
    }

    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        self.data.iter().map(Scalar::to_complex).collect()
    }

    fn check_dim(&self, other: &Mat, what: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{what}: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Mat, what: &str, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Mat> {
        self.check_dim(other, what)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Mat::normalized(self.n, data))
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn schur_product(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, "schur_product", |a, b| a * b)
    }

    /// Entrywise inverse; fails on the first zero entry.
    pub fn schur_inverse(&self) -> Result<Mat> {
        let mut data = Vec::with_capacity(self.data.len());
        for (k, s) in self.data.iter().enumerate() {
            match s.inv() {
                Some(v) if !s.is_zero() => data.push(v),
                _ => {
                    return Err(Error::SchurSingular {
                        row: k / self.n,
                        col: k % self.n,
                    })
                }
            }
        }
        Ok(Mat::normalized(self.n, data))
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::normalized(self.n, self.data.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Mat {
        Mat::normalized(self.n, self.data.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other, "mul")?;
        let n = self.n;
        let row = |i: usize| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); n];
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_exact() && a.is_zero_tol(0.0) {
                    continue;
                }
                for (j, slot) in out.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if b.is_exact() && b.is_zero_tol(0.0) {
                        continue;
                    }
                    *slot = &*slot + &(a * b);
                }
            }
            out
        };
        let rows: Vec<Vec<Scalar>> = if n >= 24 {
            (0..n).into_par_iter().map(row).collect()
        } else {
            (0..n).map(row).collect()
        };
        Ok(Mat::normalized(n, rows.into_iter().flatten().collect()))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// A·B − B·A.
    pub fn commutator(&self, other: &Mat) -> Result<Mat> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// Exact zero test in exact mode, max-entry below `eps` otherwise.
    pub fn is_zero_tol(&self, eps: f64) -> bool {
        self.data.iter().all(|s| s.is_zero_tol(eps))
    }

    /// Maximum entrywise deviation |a - b|.
    pub fn residual(&self, other: &Mat) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn eq_tol(&self, other: &Mat, eps: f64) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a.eq_tol(b, eps))
    }

    pub fn is_diagonal(&self, eps: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero_tol(eps)))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// True when every entry is exactly 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.is_exact()
            && self
                .data
                .iter()
                .all(|s| s.eq_tol(&Scalar::zero(), 0.0) || s.eq_tol(&Scalar::one(), 0.0))
    }

    pub fn pow(&self, e: u32) -> Result<Mat> {
        let mut acc = Mat::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.n {
            return Err(Error::Dimension(format!("vector length {} vs {}", v.len(), self.n)));
        }
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Inverse by Gauss-Jordan elimination (exact pivots in exact mode, partial
    /// pivoting otherwise).
    pub fn inverse(&self) -> Result<Mat> {
        let n = self.n;
        let exact = self.is_exact();
        let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| Scalar::int((i == j) as i64)).collect())
            .collect();
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let piv = if exact {
                (col..n).find(|&r| !a[r][col].is_zero_tol(0.0))
            } else {
                (col..n)
                    .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                    .filter(|&r| a[r][col].abs() > 1e-13 * scale)
            };
            let piv = piv.ok_or(Error::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv().ok_or(Error::Singular)?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero_tol(0.0) {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
        Mat::from_rows(&inv)
    }

    pub fn is_normal(&self, eps: f64) -> Result<bool> {
        let h = self.conj_transpose();
        Ok(self.mul(&h)?.eq_tol(&h.mul(self)?, eps))
    }

    /// Σ coeffs[i]·mats[i].
    pub fn linear_combination(coeffs: &[Scalar], mats: &[Mat]) -> Result<Mat> {
        let n = mats.first().map_or(0, Mat::n);
        let mut acc = Mat::zeros(n);
        for (c, m) in coeffs.iter().zip(mats) {
            acc = acc.add(&m.scale(c))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_are_schur_idempotent() {
        let j = Mat::ones(3);
        assert_eq!(j.schur_product(&j).unwrap(), j);
        assert_eq!(Mat::identity(3).schur_product(&j).unwrap(), Mat::identity(3));
        assert_eq!(j.schur_inverse().unwrap(), j);
    }

    #[test]
    fn schur_inverse_reports_position() {
        let m = Mat::from_ints(&[&[1, 2], &[0, 1]]);
        assert_eq!(m.schur_inverse(), Err(Error::SchurSingular { row: 1, col: 0 }));
    }

    #[test]
    fn inverse_of_integer_matrix() {
        let m = Mat::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(3));
        assert_eq!(Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn entries_share_an_order() {
        let m = Mat::from_fn(2, |i, j| if i == j { Scalar::zeta(3, 1) } else { Scalar::zeta(4, 1) });
        assert_eq!(m.order(), Some(12));
        assert!(m.entries().iter().all(|s| s.order() == Some(12)));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(Mat::identity(2).mul(&Mat::identity(3)).is_err());
        assert!(Mat::new(2, vec![Scalar::one()]).is_err());
    }
}
