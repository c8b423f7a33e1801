//! Interacting Fock spaces: ladder operators from Jacobi coefficients or from the
//! distance stratification of a distance-regular graph, and sl(2) checks.
//!
//! Operators are held in the symmetric gauge (B⁺ and B⁻ carry √ω). Square roots
//! of large integers live in big cyclotomic fields, so commutator identities are
//! evaluated exactly in the monic gauge (B⁺ carries ω, B⁻ carries 1), which is
//! conjugate to the symmetric one by a diagonal matrix and stays rational.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Mat, Rational, Scalar};
use crate::settings::Settings;

#[derive(Debug, Clone)]
pub struct JacobiCoefficients {
    /// ω_1..ω_d.
    pub omega: Vec<Scalar>,
    /// α_1..α_{d+1}.
    pub alpha: Vec<Scalar>,
}

impl JacobiCoefficients {
    pub fn new(omega: Vec<Scalar>, alpha: Vec<Scalar>) -> Result<Self> {
        if alpha.len() != omega.len() + 1 {
            return Err(Error::Dimension(format!(
                "{} omegas need {} alphas, got {}",
                omega.len(),
                omega.len() + 1,
                alpha.len()
            )));
        }
        let mut seen_zero = false;
        for (k, w) in omega.iter().enumerate() {
            let z = w.to_complex();
            let real = match w.as_cyclo() {
                Some(c) => c.conj() == *c,
                None => z.im.abs() < 1e-12,
            };
            if !real || z.re < 0.0 {
                return Err(Error::Domain(format!("omega_{} = {w} is not a non-negative real", k + 1)));
            }
            let zero = w.is_zero_tol(1e-12);
            if seen_zero && !zero {
                return Err(Error::Domain(format!(
                    "omega_{} is nonzero after an earlier zero",
                    k + 1
                )));
            }
            seen_zero |= zero;
        }
        Ok(JacobiCoefficients { omega, alpha })
    }

    /// ω_n = n(d − n + 1), α = 0: the binary Hamming ladder.
    pub fn hamming_ladder(d: usize) -> JacobiCoefficients {
        let omega = (1..=d).map(|n| Scalar::int((n * (d - n + 1)) as i64)).collect();
        JacobiCoefficients {
            omega,
            alpha: vec![Scalar::zero(); d + 1],
        }
    }

    pub fn from_ints(omega: &[i64], alpha: &[i64]) -> Result<JacobiCoefficients> {
        JacobiCoefficients::new(
            omega.iter().map(|&w| Scalar::int(w)).collect(),
            alpha.iter().map(|&a| Scalar::int(a)).collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.omega.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    FromGraph { base: usize, vertices: usize },
}

#[derive(Debug, Clone)]
pub struct InteractingFockSpace {
    pub jacobi: JacobiCoefficients,
    pub bplus: Mat,
    pub bminus: Mat,
    pub bcirc: Mat,
    pub provenance: Provenance,
}

impl InteractingFockSpace {
    pub fn dimension(&self) -> usize {
        self.jacobi.d() + 1
    }

    /// The tridiagonal Jacobi matrix B⁺ + B⁻ + B∘.
    pub fn t_matrix(&self) -> Result<Mat> {
        self.bplus.add(&self.bminus)?.add(&self.bcirc)
    }

    /// (B⁺, B⁻) in the monic gauge: B⁺[n+1][n] = ω_{n+1}, B⁻[n][n+1] = 1 (0 when ω_{n+1} = 0).
    pub fn monic_ladder(&self) -> (Mat, Mat) {
        monic(&self.jacobi)
    }

    /// s_n = Π_{m ≤ n} √ω_m, the diagonal relating the two gauges.
    pub fn gauge_scales(&self) -> Vec<f64> {
        let mut s = vec![1.0];
        for w in &self.jacobi.omega {
            let prev = *s.last().unwrap_or(&1.0);
            s.push(prev * w.to_complex().re.max(0.0).sqrt());
        }
        s
    }
}

fn monic(j: &JacobiCoefficients) -> (Mat, Mat) {
    let size = j.d() + 1;
    let bp = Mat::from_fn(size, |r, c| {
        if r == c + 1 {
            j.omega[c].clone()
        } else {
            Scalar::zero()
        }
    });
    let bm = Mat::from_fn(size, |r, c| {
        if c == r + 1 && !j.omega[r].is_zero_tol(1e-12) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    (bp, bm)
}

/// Ladder operators from Jacobi coefficients; B⁺ + B⁻ + B∘ is checked against T.
pub fn build_ifs(j: &JacobiCoefficients) -> Result<InteractingFockSpace> {
    let j = JacobiCoefficients::new(j.omega.clone(), j.alpha.clone())?;
    let size = j.d() + 1;
    let roots: Vec<Scalar> = j.omega.iter().map(Scalar::sqrt).collect();
    let bplus = Mat::from_fn(size, |r, c| if r == c + 1 { roots[c].clone() } else { Scalar::zero() });
    let bminus = bplus.transpose();
    let bcirc = Mat::diag(&j.alpha);
    let f = InteractingFockSpace {
        jacobi: j,
        bplus,
        bminus,
        bcirc,
        provenance: Provenance::Explicit,
    };
    let t = Mat::from_fn(size, |r, c| {
        if r == c {
            f.jacobi.alpha[r].clone()
        } else if r == c + 1 {
            roots[c].clone()
        } else if c == r + 1 {
            roots[r].clone()
        } else {
            Scalar::zero()
        }
    });
    if !f.t_matrix()?.eq_tol(&t, 1e-12) {
        return Err(Error::Precondition("quantum decomposition does not reproduce T".into()));
    }
    Ok(f)
}

/// All-pairs graph distances by BFS; `usize::MAX` marks unreachable pairs.
pub fn distance_matrix(adj: &Mat) -> Result<Vec<usize>> {
    let n = adj.n();
    if !adj.is_zero_one() || adj != &adj.transpose() {
        return Err(Error::Precondition("adjacency matrix must be symmetric 0/1".into()));
    }
    if (0..n).any(|i| !adj.get(i, i).is_zero_tol(0.0)) {
        return Err(Error::Precondition("adjacency matrix must have a zero diagonal".into()));
    }
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !adj.get(i, j).is_zero_tol(0.0)).collect())
        .collect();
    let mut dist = vec![usize::MAX; n * n];
    for s in 0..n {
        let mut queue = VecDeque::from([s]);
        dist[s * n + s] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &nbrs[u] {
                if dist[s * n + v] == usize::MAX {
                    dist[s * n + v] = dist[s * n + u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionArray {
    /// c_h, a_h, b_h for h = 0..diameter.
    pub c: Vec<i64>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

/// Verifies distance-regularity exhaustively and returns the intersection array.
pub fn intersection_array(adj: &Mat, settings: &Settings) -> Result<IntersectionArray> {
    let n = adj.n();
    if n > settings.vertex_cap {
        return Err(Error::CapExceeded {
            what: "vertices".into(),
            size: n as u128,
            cap: settings.vertex_cap as u128,
        });
    }
    let dist = distance_matrix(adj)?;
    if dist.iter().any(|&d| d == usize::MAX) {
        return Err(Error::NotDistanceRegular("graph is disconnected".into()));
    }
    let diam = dist.iter().copied().max().unwrap_or(0);
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| dist[i * n + j] == 1).collect())
        .collect();
    let mut c = vec![None; diam + 1];
    let mut a = vec![None; diam + 1];
    let mut b = vec![None; diam + 1];
    for x in 0..n {
        for y in 0..n {
            let h = dist[x * n + y];
            let (mut cc, mut aa, mut bb) = (0i64, 0i64, 0i64);
            for &z in &nbrs[y] {
                let dz = dist[x * n + z];
                if dz + 1 == h {
                    cc += 1;
                } else if dz == h {
                    aa += 1;
                } else {
                    bb += 1;
                }
            }
            for (slot, v, name) in [(&mut c[h], cc, "c"), (&mut a[h], aa, "a"), (&mut b[h], bb, "b")] {
                match slot {
                    None => *slot = Some(v),
                    Some(prev) if *prev != v => {
                        return Err(Error::NotDistanceRegular(format!(
                            "{name}_{h} differs at pair ({x},{y}): {v} vs {prev}"
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let unwrap = |v: Vec<Option<i64>>| v.into_iter().map(|x| x.unwrap_or(0)).collect();
    Ok(IntersectionArray {
        c: unwrap(c),
        a: unwrap(a),
        b: unwrap(b),
    })
}

#[derive(Debug, Clone)]
pub struct Stratification {
    pub ifs: InteractingFockSpace,
    pub array: IntersectionArray,
    pub strata_sizes: Vec<usize>,
    /// Compression of the adjacency matrix onto the normalised strata agrees with B⁺ + B⁻ + B∘.
    pub compression_matches: bool,
}

/// Stratifies a distance-regular graph by distance from `base`:
/// ω_{n+1} = c_{n+1}·b_n, α_{n+1} = a_n.
pub fn stratify_distance_regular(adj: &Mat, base: usize, settings: &Settings) -> Result<Stratification> {
    let n = adj.n();
    if base >= n {
        return Err(Error::Domain(format!("base vertex {base} out of range")));
    }
    let array = intersection_array(adj, settings)?;
    let diam = array.c.len() - 1;
    let omega: Vec<Scalar> = (0..diam).map(|h| Scalar::int(array.c[h + 1] * array.b[h])).collect();
    let alpha: Vec<Scalar> = (0..=diam).map(|h| Scalar::int(array.a[h])).collect();
    let mut ifs = build_ifs(&JacobiCoefficients::new(omega, alpha)?)?;
    ifs.provenance = Provenance::FromGraph { base, vertices: n };
    let dist = distance_matrix(adj)?;
    let mut strata_sizes = vec![0usize; diam + 1];
    for y in 0..n {
        strata_sizes[dist[base * n + y]] += 1;
    }
    // ⟨Φ_r, A Φ_s⟩ = e(r,s)/√(k_r k_s); compare squares with T² entries exactly.
    let mut edges = vec![vec![0i64; diam + 1]; diam + 1];
    for x in 0..n {
        for y in 0..n {
            if !adj.get(x, y).is_zero_tol(0.0) {
                edges[dist[base * n + x]][dist[base * n + y]] += 1;
            }
        }
    }
    let t = ifs.t_matrix()?;
    let mut compression_matches = true;
    for r in 0..=diam {
        for s in 0..=diam {
            let sq = Rational::new(
                (edges[r][s] * edges[r][s]).into(),
                ((strata_sizes[r] * strata_sizes[s]) as i64).into(),
            );
            let expected = t.get(r, s);
            let exp_sq = expected * expected;
            let sign_ok = expected.to_complex().re >= 0.0 || edges[r][s] == 0;
            compression_matches &= exp_sq.eq_tol(&Scalar::rational(&sq), 1e-9) && sign_ok;
        }
    }
    Ok(Stratification {
        ifs,
        array,
        strata_sizes,
        compression_matches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Sl2Report {
    pub dimension: usize,
    /// Diagonal of H = B⁺B⁻ − B⁻B⁺ (H is always diagonal for a ladder).
    pub h_diagonal: Vec<String>,
    #[serde(skip)]
    pub h_values: Vec<Scalar>,
    /// max |[H,B⁺] − 2B⁺| in the symmetric gauge.
    pub residual_plus: f64,
    /// max |[H,B⁻] + 2B⁻| in the symmetric gauge.
    pub residual_minus: f64,
    /// max |[B⁺,B⁻] − H| between the symmetric-gauge operators and the monic-gauge H.
    pub residual_bracket: f64,
    /// max |H − diag(2n − d)|.
    pub residual_h_expected: f64,
    /// Rows where [B⁻,B⁺] − I is nonzero.
    pub canonical_commutator_rows: Vec<usize>,
    pub exact: bool,
}

fn to_symmetric_magnitude(m: &Mat, scales: &[f64]) -> f64 {
    let n = m.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j).abs();
            if v == 0.0 {
                continue;
            }
            let f = if scales[i] > 0.0 && scales[j] > 0.0 { scales[j] / scales[i] } else { 1.0 };
            worst = worst.max(v * f);
        }
    }
    worst
}

/// The symmetric ladder mixes many square roots, so its matrix may be stored
/// approximately. [B⁺,B⁻] is diagonal with entries √ω_n·√ω_n − √ω_{n+1}·√ω_{n+1},
/// computed here one entry at a time so each stays in a small field. A root with
/// no supported exact field is squared symbolically.
fn symmetric_bracket_residual(j: &JacobiCoefficients, h: &Mat) -> f64 {
    let square = |w: &Scalar| {
        let r = w.sqrt();
        if r.is_exact() {
            &r * &r
        } else {
            w.clone()
        }
    };
    let squares: Vec<Scalar> = j.omega.iter().map(square).collect();
    let size = j.d() + 1;
    let mut worst = 0.0f64;
    for n in 0..size {
        let up = if n > 0 { squares[n - 1].clone() } else { Scalar::zero() };
        let down = if n < j.d() { squares[n].clone() } else { Scalar::zero() };
        worst = worst.max((&(&up - &down) - h.get(n, n)).abs());
        for m in 0..size {
            if m != n {
                worst = worst.max(h.get(n, m).abs());
            }
        }
    }
    worst
}

/// H = [B⁺,B⁻] and the residuals of [H,B⁺] = 2B⁺, [H,B⁻] = −2B⁻.
pub fn sl2_check(f: &InteractingFockSpace) -> Result<Sl2Report> {
    let d = f.jacobi.d();
    let size = d + 1;
    let (bp, bm) = f.monic_ladder();
    let h = bp.commutator(&bm)?;
    let scales = f.gauge_scales();
    let two = Scalar::int(2);
    let rp = h.commutator(&bp)?.sub(&bp.scale(&two))?;
    let rm = h.commutator(&bm)?.add(&bm.scale(&two))?;
    let residual_bracket = if f.bplus.is_exact() {
        f.bplus.commutator(&f.bminus)?.residual(&h)?
    } else {
        symmetric_bracket_residual(&f.jacobi, &h)
    };
    let expected = Mat::diag(&(0..size).map(|n| Scalar::int(2 * n as i64 - d as i64)).collect::<Vec<_>>());
    let residual_h_expected = h.residual(&expected)?;
    let ccr = bm.commutator(&bp)?.sub(&Mat::identity(size))?;
    let canonical_commutator_rows = (0..size)
        .filter(|&r| ccr.row(r).iter().any(|x| !x.is_zero_tol(1e-12)))
        .collect();
    let h_values = h.diagonal();
    Ok(Sl2Report {
        dimension: size,
        h_diagonal: h_values.iter().map(|x| x.to_string()).collect(),
        h_values,
        residual_plus: to_symmetric_magnitude(&rp, &scales),
        residual_minus: to_symmetric_magnitude(&rm, &scales),
        residual_bracket,
        residual_h_expected,
        canonical_commutator_rows,
        exact: h.is_exact() && rp.is_exact(),
    })
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    /// `values[s][k]` = P_k(x_s).
    pub values: Vec<Vec<Scalar>>,
    pub residual: f64,
}

/// P_0 = 1, P_{k+1} = (x − α_{k+1})P_k − ω_k P_{k−1}, evaluated at each sample point.
pub fn orthopoly_recurrence(j: &JacobiCoefficients, n: usize, xs: &[Scalar]) -> Result<RecurrenceReport> {
    if n > j.d() + 1 {
        return Err(Error::Domain(format!("degree {n} exceeds d + 1 = {}", j.d() + 1)));
    }
    let mut values = Vec::with_capacity(xs.len());
    let mut residual = 0.0f64;
    for x in xs {
        let mut p: Vec<Scalar> = vec![Scalar::one()];
        for k in 0..n {
            let prev = if k == 0 { Scalar::zero() } else { &j.omega[k - 1] * &p[k - 1] };
            let next = &(&(x - &j.alpha[k]) * &p[k]) - &prev;
            p.push(next);
        }
        // x P_k = P_{k+1} + ω_k P_{k−1} + α_{k+1} P_k
        for k in 0..n {
            let lower = if k == 0 { Scalar::zero() } else { &j.omega[k - 1] * &p[k - 1] };
            let rhs = &(&p[k + 1] + &lower) + &(&j.alpha[k] * &p[k]);
            residual = residual.max((&(x * &p[k]) - &rhs).abs());
        }
        values.push(p);
    }
    Ok(RecurrenceReport { values, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::hamming_scheme;

    #[test]
    fn unit_sequence_gives_path_graph() {
        let f = build_ifs(&JacobiCoefficients::from_ints(&[1, 1, 1], &[0, 0, 0, 0]).unwrap()).unwrap();
        let path = Mat::from_ints(&[&[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(f.t_matrix().unwrap(), path);
    }

    #[test]
    fn broken_zero_tail_rejected() {
        assert!(JacobiCoefficients::from_ints(&[1, 0, 2], &[0; 4]).is_err());
        assert!(JacobiCoefficients::from_ints(&[-1], &[0; 2]).is_err());
    }

    #[test]
    fn cube_ladder_sl2() {
        let f = build_ifs(&JacobiCoefficients::hamming_ladder(3)).unwrap();
        let r = sl2_check(&f).unwrap();
        assert_eq!(r.h_values, vec![Scalar::int(-3), Scalar::int(-1), Scalar::int(1), Scalar::int(3)]);
        assert_eq!((r.residual_plus, r.residual_minus, r.residual_h_expected), (0.0, 0.0, 0.0));
        assert!(r.residual_bracket < 1e-12);
    }

    #[test]
    fn two_level_ladder() {
        let f = build_ifs(&JacobiCoefficients::from_ints(&[1], &[0, 0]).unwrap()).unwrap();
        let r = sl2_check(&f).unwrap();
        assert_eq!(r.h_values, vec![Scalar::int(-1), Scalar::int(1)]);
        assert_eq!(r.residual_plus, 0.0);
    }

    #[test]
    fn truncated_boson_ladder() {
        let f = build_ifs(&JacobiCoefficients::from_ints(&[1, 2, 3, 4], &[0; 5]).unwrap()).unwrap();
        let r = sl2_check(&f).unwrap();
        assert_eq!(r.canonical_commutator_rows, vec![4]);
        assert!(r.residual_plus > 0.0);
    }

    #[test]
    fn cube_stratification() {
        let cube = hamming_scheme(3, 2, &Settings::default()).unwrap().class(1);
        for base in [0, 5] {
            let s = stratify_distance_regular(&cube, base, &Settings::default()).unwrap();
            assert_eq!(s.ifs.jacobi.omega, vec![Scalar::int(3), Scalar::int(4), Scalar::int(3)]);
            assert!(s.ifs.jacobi.alpha.iter().all(|a| a.is_zero_tol(0.0)));
            assert_eq!(s.strata_sizes, vec![1, 3, 3, 1]);
            assert!(s.compression_matches);
        }
    }

    #[test]
    fn complete_graph_stratification() {
        let k4 = Mat::ones(4).sub(&Mat::identity(4)).unwrap();
        let s = stratify_distance_regular(&k4, 0, &Settings::default()).unwrap();
        assert_eq!(s.ifs.jacobi.omega, vec![Scalar::int(3)]);
        assert_eq!(s.ifs.jacobi.alpha, vec![Scalar::int(0), Scalar::int(2)]);
    }

    #[test]
    fn non_distance_regular_graph() {
        // path on 3 vertices: c/a/b differ between the middle and an end vertex
        let p3 = Mat::from_ints(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
        assert!(matches!(
            stratify_distance_regular(&p3, 0, &Settings::default()),
            Err(Error::NotDistanceRegular(_))
        ));
    }

    #[test]
    fn recurrence_roots_are_spectrum() {
        let j = JacobiCoefficients::hamming_ladder(3);
        let xs: Vec<Scalar> = [-3, -1, 1, 3].iter().map(|&x| Scalar::int(x)).collect();
        let r = orthopoly_recurrence(&j, 4, &xs).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.values.iter().all(|v| v[4].is_zero_tol(0.0)));
        let r0 = orthopoly_recurrence(&j, 0, &xs).unwrap();
        assert!(r0.values.iter().all(|v| v == &vec![Scalar::one()]));
        assert!(orthopoly_recurrence(&j, 5, &xs).is_err());
    }
}
