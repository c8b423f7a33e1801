use super::mat::Mat;
use super::scalar::Scalar;

fn pivot_row(rows: &[Vec<Scalar>], start: usize, col: usize, exact: bool, eps: f64) -> Option<usize> {
    if exact {
        (start..rows.len()).find(|&r| !rows[r][col].is_zero_tol(0.0))
    } else {
        (start..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .filter(|&r| rows[r][col].abs() > eps)
    }
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Scalar>>, eps: f64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let exact = rows.iter().flatten().all(Scalar::is_exact);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = pivot_row(rows, r, col, exact, eps) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero_tol(0.0) {
                continue;
            }
            let f = rows[i][col].clone();
            let (src, dst) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (d, s) in dst.iter_mut().zip(src) {
                *d = &*d - &(&f * s);
            }
            if !exact {
                for d in dst.iter_mut() {
                    if d.abs() < eps * 1e-3 {
                        *d = Scalar::approx(0.0, 0.0);
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of {x : rows·x = 0}, one vector per free column.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, eps: f64) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    if m.is_empty() {
        return (0..ncols)
            .map(|k| (0..ncols).map(|j| Scalar::int((j == k) as i64)).collect())
            .collect();
    }
    let pivots = rref(&mut m, eps);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let exact = m.iter().flatten().all(Scalar::is_exact);
    free.iter()
        .map(|&f| {
            let mut v: Vec<Scalar> = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[r][f];
            }
            if !exact {
                v = v.iter().map(Scalar::to_approx).collect();
            }
            v
        })
        .collect()
}

pub fn rank(rows: &[Vec<Scalar>], eps: f64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, eps).len()
}

fn flatten(m: &Mat) -> Vec<Scalar> {
    m.entries().to_vec()
}

/// Dimension of the span of the given matrices.
pub fn span_dimension(mats: &[Mat], eps: f64) -> usize {
    let rows: Vec<Vec<Scalar>> = mats.iter().map(flatten).collect();
    rank(&rows, eps)
}

/// True when span(a) = span(b).
pub fn same_span(a: &[Mat], b: &[Mat], eps: f64) -> bool {
    let da = span_dimension(a, eps);
    let db = span_dimension(b, eps);
    let joint: Vec<Mat> = a.iter().chain(b).cloned().collect();
    da == db && span_dimension(&joint, eps) == da
}

/// Coefficients c with Σ c_i basis_i = target, if they exist.
pub fn coordinates(basis: &[Mat], target: &Mat, eps: f64) -> Option<Vec<Scalar>> {
    let k = basis.len();
    let len = target.entries().len();
    // one equation per matrix entry, unknowns are the k coefficients
    let mut rows: Vec<Vec<Scalar>> = (0..len)
        .map(|e| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b.entries()[e].clone()).collect();
            row.push(target.entries()[e].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, eps);
    if pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![Scalar::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        coeffs[p] = rows[r][k].clone();
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)]];
        let ns = nullspace(&rows, 3, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Scalar = v.iter().zip(&rows[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero_tol(0.0));
        }
    }

    #[test]
    fn coordinates_in_a_basis() {
        let basis = vec![Mat::identity(2), Mat::ones(2)];
        let target = Mat::from_ints(&[&[3, 1], &[1, 3]]);
        let c = coordinates(&basis, &target, 1e-12).unwrap();
        assert_eq!(c, vec![Scalar::int(2), Scalar::int(1)]);
        assert!(coordinates(&basis, &Mat::from_ints(&[&[1, 0], &[0, 2]]), 1e-12).is_none());
    }

    #[test]
    fn spans_compare() {
        let a = vec![Mat::identity(2), Mat::ones(2)];
        let b = vec![Mat::ones(2).sub(&Mat::identity(2)).unwrap(), Mat::ones(2)];
        assert!(same_span(&a, &b, 1e-12));
        assert_eq!(span_dimension(&a, 1e-12), 2);
    }
}
