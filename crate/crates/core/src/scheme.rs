//! Association schemes: axioms, intersection numbers, eigenmatrices, Krein
//! parameters, self-duality and a few standard constructions.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::json::{mat_from_json, mat_to_json};
use crate::exactalg::{simultaneous_eigenprojections, Mat, Rational, Scalar};
use crate::settings::{Mode, Settings};

/// Schemes above this many vertices are checked on representative pairs only.
const FULL_CHECK_LIMIT: usize = 512;

pub type IntTensor = Vec<Vec<Vec<i64>>>;
pub type Tensor = Vec<Vec<Vec<Scalar>>>;

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// E_0..E_d, E_0 = J/|X|.
    pub projections: Vec<Mat>,
    /// `p[i][j]` is the eigenvalue of A_j on E_i.
    pub p: Mat,
    /// Q = |X|·P⁻¹.
    pub q: Mat,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct AssociationScheme {
    n: usize,
    d: usize,
    /// `labels[x*n+y]` is the class index of the pair (x, y).
    labels: Vec<u16>,
    commutative: bool,
    origin: String,
    fully_verified: bool,
    settings: Settings,
    intersection: OnceLock<IntTensor>,
    spectral: OnceLock<Result<SpectralData>>,
    krein: OnceLock<Result<Tensor>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KreinReport {
    #[serde(skip)]
    pub q: Tensor,
    /// Entries (k, i, j) that are not real and non-negative.
    pub violations: Vec<(usize, usize, usize, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub is_self_dual: bool,
    pub permutation: Option<Vec<usize>>,
    /// max |p^k_ij − q^{σk}_{σi σj}| for the reported permutation (identity if none).
    pub max_deviation: f64,
    pub identity_deviation: f64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
pub struct HypergroupReport {
    /// `c[k][i][j]` with e_i∘e_j = Σ_k c^k_ij e_k, e_i = E_i/m_i.
    pub c: Tensor,
    pub residual: f64,
}

fn max_len_index(d: usize) -> Result<()> {
    if d >= u16::MAX as usize {
        return Err(Error::Precondition("too many classes".into()));
    }
    Ok(())
}

impl AssociationScheme {
    fn from_labels(n: usize, d: usize, labels: Vec<u16>, origin: &str, settings: &Settings) -> Result<Self> {
        max_len_index(d)?;
        let mut s = AssociationScheme {
            n,
            d,
            labels,
            commutative: false,
            origin: origin.to_string(),
            fully_verified: false,
            settings: *settings,
            intersection: OnceLock::new(),
            spectral: OnceLock::new(),
            krein: OnceLock::new(),
        };
        s.check_transpose_closure()?;
        let full = n <= FULL_CHECK_LIMIT;
        let p = s.compute_intersection(full)?;
        s.commutative = (0..=d).all(|k| (0..=d).all(|i| (0..=d).all(|j| p[k][i][j] == p[k][j][i])));
        s.fully_verified = full;
        let _ = s.intersection.set(p);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-identity classes.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// True when axiom (4) was checked on every pair rather than representatives.
    pub fn fully_verified(&self) -> bool {
        self.fully_verified
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn label(&self, x: usize, y: usize) -> usize {
        self.labels[x * self.n + y] as usize
    }

    pub fn class(&self, i: usize) -> Mat {
        Mat::from_fn(self.n, |x, y| Scalar::int((self.label(x, y) == i) as i64))
    }

    pub fn classes(&self) -> Vec<Mat> {
        (0..=self.d).map(|i| self.class(i)).collect()
    }

    pub fn valencies(&self) -> Vec<usize> {
        let mut v = vec![0; self.d + 1];
        for y in 0..self.n {
            v[self.label(0, y)] += 1;
        }
        v
    }

    /// Index j' with A_jᵀ = A_j'.
    pub fn transpose_index(&self, j: usize) -> usize {
        (0..self.n * self.n)
            .find(|&k| self.labels[k] as usize == j)
            .map(|k| self.label(k % self.n, k / self.n))
            .unwrap_or(j)
    }

    fn check_transpose_closure(&self) -> Result<()> {
        let n = self.n;
        let mut image = vec![None; self.d + 1];
        for x in 0..n {
            for y in 0..n {
                let a = self.label(x, y);
                let b = self.label(y, x);
                match image[a] {
                    None => image[a] = Some(b),
                    Some(prev) if prev != b => {
                        return Err(Error::Axiom {
                            axiom: 3,
                            witness: format!("transpose of A_{a} is not a class (pair ({y},{x}))"),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn counts_for_pair(&self, x: usize, y: usize) -> Vec<i64> {
        let m = self.d + 1;
        let mut c = vec![0i64; m * m];
        for z in 0..self.n {
            c[self.label(x, z) * m + self.label(z, y)] += 1;
        }
        c
    }

    fn compute_intersection(&self, full: bool) -> Result<IntTensor> {
        let n = self.n;
        let m = self.d + 1;
        let mut rep: Vec<Option<(usize, usize)>> = vec![None; m];
        for x in 0..n {
            for y in 0..n {
                let k = self.label(x, y);
                if rep[k].is_none() {
                    rep[k] = Some((x, y));
                }
            }
        }
        let mut p = vec![vec![vec![0i64; m]; m]; m];
        let mut reps = vec![Vec::new(); m];
        for k in 0..m {
            let (x, y) = rep[k].ok_or_else(|| Error::NotAScheme(format!("class {k} is empty")))?;
            reps[k] = self.counts_for_pair(x, y);
            for i in 0..m {
                for j in 0..m {
                    p[k][i][j] = reps[k][i * m + j];
                }
            }
        }
        if full {
            let bad = (0..n).into_par_iter().find_map_first(|x| {
                for y in 0..n {
                    let k = self.label(x, y);
                    let c = self.counts_for_pair(x, y);
                    if c != reps[k] {
                        let pos = c.iter().zip(&reps[k]).position(|(a, b)| a != b).unwrap_or(0);
                        return Some((x, y, k, pos / m, pos % m));
                    }
                }
                None
            });
            if let Some((x, y, k, i, j)) = bad {
                return Err(Error::Axiom {
                    axiom: 4,
                    witness: format!(
                        "A_{i}A_{j} is not constant on class {k}: pair ({x},{y}) differs from the class representative"
                    ),
                });
            }
        }
        Ok(p)
    }

    /// p[k][i][j] with A_iA_j = Σ_k p^k_ij A_k.
    pub fn intersection_numbers(&self) -> &IntTensor {
        self.intersection.get_or_init(|| {
            self.compute_intersection(false)
                .expect("intersection numbers were validated at construction")
        })
    }

    fn require_commutative(&self) -> Result<()> {
        if self.commutative {
            Ok(())
        } else {
            Err(Error::NonCommutative)
        }
    }

    fn compute_spectral(&self) -> Result<SpectralData> {
        self.require_commutative()?;
        let n = self.n;
        let mut classes = self.classes();
        if self.settings.mode == Mode::Approx {
            classes = classes.iter().map(Mat::to_approx).collect();
        }
        let es = simultaneous_eigenprojections(&classes, &self.settings)?;
        if es.projections.len() != self.d + 1 {
            return Err(Error::NotAScheme(format!(
                "{} eigenspaces for {} classes",
                es.projections.len(),
                self.d + 1
            )));
        }
        let order = order_idempotents(&self.valencies(), &es.ranks, &es.eigenvalues);
        let projections: Vec<Mat> = order.iter().map(|&k| es.projections[k].clone()).collect();
        let multiplicities: Vec<usize> = order.iter().map(|&k| es.ranks[k]).collect();
        let p_rows: Vec<Vec<Scalar>> = order.iter().map(|&k| es.eigenvalues[k].clone()).collect();
        let p = Mat::from_rows(&p_rows)?;
        let q = p.inverse()?.scale(&Scalar::int(n as i64));
        Ok(SpectralData {
            projections,
            p,
            q,
            multiplicities,
        })
    }

    pub fn spectral(&self) -> Result<&SpectralData> {
        self.spectral
            .get_or_init(|| self.compute_spectral())
            .as_ref()
            .map_err(Clone::clone)
    }

    /// (P, Q) with A_j = Σ_i P_ij E_i and PQ = |X|·I.
    pub fn eigenmatrices(&self) -> Result<(Mat, Mat)> {
        let s = self.spectral()?;
        Ok((s.p.clone(), s.q.clone()))
    }

    fn compute_krein(&self) -> Result<Tensor> {
        let sd = self.spectral()?;
        let m = self.d + 1;
        let n = self.n;
        let es = &sd.projections;
        let mut q = vec![vec![vec![Scalar::zero(); m]; m]; m];
        for i in 0..m {
            for j in i..m {
                let s = es[i].schur_product(&es[j])?;
                for k in 0..m {
                    // tr(S E_k) = Σ_xy S_xy (E_k)_yx
                    let mut tr = Scalar::zero();
                    for x in 0..n {
                        for y in 0..n {
                            let a = s.get(x, y);
                            if a.is_zero_tol(0.0) {
                                continue;
                            }
                            tr = &tr + &(a * es[k].get(y, x));
                        }
                    }
                    let v = tr.scale_rational(&Rational::new(
                        BigInt::from(n),
                        BigInt::from(sd.multiplicities[k]),
                    ));
                    q[k][i][j] = v.clone();
                    q[k][j][i] = v;
                }
            }
        }
        Ok(q)
    }

    pub fn krein_tensor(&self) -> Result<&Tensor> {
        self.krein
            .get_or_init(|| self.compute_krein())
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Krein parameters q[k][i][j] with E_i∘E_j = (1/|X|) Σ_k q^k_ij E_k, plus positivity flags.
    pub fn krein_parameters(&self) -> Result<KreinReport> {
        let q = self.krein_tensor()?.clone();
        let eps = self.settings.eps;
        let mut violations = Vec::new();
        for (k, qk) in q.iter().enumerate() {
            for (i, row) in qk.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let z = v.to_complex();
                    let real = match v.as_cyclo() {
                        Some(c) => c.conj() == *c,
                        None => z.im.abs() < eps,
                    };
                    if !real || z.re < -eps {
                        violations.push((k, i, j, v.to_string()));
                    }
                }
            }
        }
        Ok(KreinReport { q, violations })
    }

    fn deviation(&self, sigma: &[usize], q: &Tensor) -> f64 {
        let p = self.intersection_numbers();
        let m = self.d + 1;
        let mut worst: f64 = 0.0;
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let pv = Scalar::int(p[k][i][j]);
                    let qv = &q[sigma[k]][sigma[i]][sigma[j]];
                    let dv = (&pv - qv).abs();
                    worst = worst.max(dv);
                }
            }
        }
        worst
    }

    /// Searches permutations σ (σ(0) = 0) with p^k_ij = q^{σk}_{σi σj}.
    pub fn self_duality_check(&self) -> Result<DualityReport> {
        let q = self.krein_tensor()?;
        let sd = self.spectral()?;
        let p = self.intersection_numbers();
        let m = self.d + 1;
        let eps = self.settings.eps;
        let val = self.valencies();
        let equal = |a: i64, b: &Scalar| b.eq_tol(&Scalar::int(a), eps);
        let identity: Vec<usize> = (0..m).collect();
        let identity_deviation = self.deviation(&identity, q);
        // Backtracking; consistency is checked on triples whose indices are all assigned.
        let mut sigma = vec![usize::MAX; m];
        let mut used = vec![false; m];
        sigma[0] = 0;
        used[0] = true;
        fn consistent(
            t: usize,
            sigma: &[usize],
            p: &IntTensor,
            q: &Tensor,
            equal: &dyn Fn(i64, &Scalar) -> bool,
        ) -> bool {
            for a in 0..=t {
                for b in 0..=t {
                    for c in 0..=t {
                        if a != t && b != t && c != t {
                            continue;
                        }
                        if !equal(p[a][b][c], &q[sigma[a]][sigma[b]][sigma[c]]) {
                            return false;
                        }
                    }
                }
            }
            true
        }
        fn search(
            t: usize,
            m: usize,
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
            val: &[usize],
            mult: &[usize],
            p: &IntTensor,
            q: &Tensor,
            equal: &dyn Fn(i64, &Scalar) -> bool,
        ) -> bool {
            if t == m {
                return true;
            }
            for cand in 1..m {
                if used[cand] || val[t] != mult[cand] {
                    continue;
                }
                sigma[t] = cand;
                used[cand] = true;
                if consistent(t, sigma, p, q, equal) && search(t + 1, m, sigma, used, val, mult, p, q, equal) {
                    return true;
                }
                used[cand] = false;
                sigma[t] = usize::MAX;
            }
            false
        }
        let found = consistent(0, &sigma, p, q, &equal)
            && search(1, m, &mut sigma, &mut used, &val, &sd.multiplicities, p, q, &equal);
        let permutation = found.then(|| sigma.clone());
        let max_deviation = match &permutation {
            Some(s) => self.deviation(s, q),
            None => identity_deviation,
        };
        Ok(DualityReport {
            is_self_dual: found,
            permutation,
            max_deviation,
            identity_deviation,
            exhaustive: m <= 9,
        })
    }

    /// Coefficients c^k_ij = m_k q^k_ij / (|X| m_i m_j) of the normalised idempotents e_i = E_i/m_i.
    pub fn hypergroup_coefficients(&self) -> Result<HypergroupReport> {
        let q = self.krein_tensor()?;
        let sd = self.spectral()?;
        let m = self.d + 1;
        let n = self.n as i64;
        let mult: Vec<i64> = sd.multiplicities.iter().map(|&x| x as i64).collect();
        let mut c = vec![vec![vec![Scalar::zero(); m]; m]; m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let r = Rational::new(BigInt::from(mult[k]), BigInt::from(n * mult[i] * mult[j]));
                    c[k][i][j] = q[k][i][j].scale_rational(&r);
                }
            }
        }
        let e: Vec<Mat> = (0..m)
            .map(|i| sd.projections[i].scale(&Scalar::ratio(1, mult[i])))
            .collect();
        let mut residual: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let lhs = e[i].schur_product(&e[j])?;
                let coeffs: Vec<Scalar> = (0..m).map(|k| c[k][i][j].clone()).collect();
                let rhs = Mat::linear_combination(&coeffs, &e)?;
                residual = residual.max(lhs.residual(&rhs)?);
            }
        }
        Ok(HypergroupReport { c, residual })
    }

    pub fn to_json(&self) -> Value {
        json!({"classes": self.classes().iter().map(mat_to_json).collect::<Vec<_>>()})
    }
}

fn row_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let (zx, zy) = (x.to_complex(), y.to_complex());
        let c = (zx.re * 1e9).round().total_cmp(&(zy.re * 1e9).round())
            .then((zx.im * 1e9).round().total_cmp(&(zy.im * 1e9).round()));
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

/// Orders idempotents: the one whose P row is the valency vector first, then for
/// each class in turn the remaining idempotent with matching multiplicity and
/// largest P row, then leftovers by descending P row.
fn order_idempotents(valencies: &[usize], ranks: &[usize], rows: &[Vec<Scalar>]) -> Vec<usize> {
    let m = ranks.len();
    let trivial = (0..m)
        .find(|&k| rows[k].iter().zip(valencies).all(|(t, v)| t.eq_tol(&Scalar::int(*v as i64), 1e-9)))
        .unwrap_or(0);
    let mut order = vec![trivial];
    let mut left: Vec<usize> = (0..m).filter(|&k| k != trivial).collect();
    for &v in valencies.iter().skip(1) {
        let best = left
            .iter()
            .copied()
            .filter(|&k| ranks[k] == v)
            .max_by(|&a, &b| row_cmp(&rows[a], &rows[b]));
        match best {
            Some(k) => {
                order.push(k);
                left.retain(|&x| x != k);
            }
            None => {}
        }
    }
    left.sort_by(|&a, &b| row_cmp(&rows[b], &rows[a]));
    order.extend(left);
    order
}

fn labels_from_classes(classes: &[Mat]) -> Result<(usize, Vec<Mat>, Vec<u16>)> {
    let first = classes
        .first()
        .ok_or_else(|| Error::Axiom { axiom: 1, witness: "no classes given".into() })?;
    let n = first.n();
    for (i, c) in classes.iter().enumerate() {
        if c.n() != n {
            return Err(Error::Dimension(format!("class {i} is {}x{} not {n}x{n}", c.n(), c.n())));
        }
        if !c.is_zero_one() {
            return Err(Error::NotAScheme(format!("class {i} is not a 0/1 matrix")));
        }
    }
    let id = Mat::identity(n);
    let pos = classes.iter().position(|c| *c == id).ok_or_else(|| Error::Axiom {
        axiom: 1,
        witness: "the identity matrix is not among the classes".into(),
    })?;
    for (i, c) in classes.iter().enumerate() {
        let t = c.transpose();
        if !classes.iter().any(|o| *o == t) {
            return Err(Error::Axiom {
                axiom: 3,
                witness: format!("the transpose of class {i} is not a class"),
            });
        }
    }
    let mut ordered = classes.to_vec();
    let idc = ordered.remove(pos);
    ordered.insert(0, idc);
    let mut labels = vec![u16::MAX; n * n];
    for (i, c) in ordered.iter().enumerate() {
        for x in 0..n {
            for y in 0..n {
                if c.get(x, y).eq_tol(&Scalar::one(), 0.0) {
                    if labels[x * n + y] != u16::MAX {
                        return Err(Error::Axiom {
                            axiom: 2,
                            witness: format!("pair ({x},{y}) lies in classes {} and {i}", labels[x * n + y]),
                        });
                    }
                    labels[x * n + y] = i as u16;
                }
            }
        }
    }
    if let Some(k) = labels.iter().position(|&l| l == u16::MAX) {
        return Err(Error::Axiom {
            axiom: 2,
            witness: format!("pair ({},{}) is in no class", k / n, k % n),
        });
    }
    Ok((n, ordered, labels))
}

/// Validates a class collection against the scheme axioms. The identity class is
/// moved to the front; the rest keep their input order.
pub fn verify_axioms(classes: &[Mat], settings: &Settings) -> Result<AssociationScheme> {
    max_len_index(classes.len())?;
    let (n, ordered, labels) = labels_from_classes(classes)?;
    for (i, c) in ordered.iter().enumerate() {
        if c.is_zero_tol(0.0) {
            return Err(Error::NotAScheme(format!("class {i} is empty")));
        }
    }
    AssociationScheme::from_labels(n, ordered.len() - 1, labels, "classes", settings)
}

/// Reads `{"classes": [matrix, ...]}` or `{"labels": [[class index, ...], ...]}`.
pub fn scheme_from_json(v: &Value, settings: &Settings) -> Result<AssociationScheme> {
    if let Some(rows) = v.get("labels").and_then(Value::as_array) {
        return scheme_from_labels(rows, settings);
    }
    let classes = v
        .get("classes")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("scheme needs a \"classes\" array".into()))?
        .iter()
        .map(mat_from_json)
        .collect::<Result<Vec<_>>>()?;
    verify_axioms(&classes, settings)
}

fn scheme_from_labels(rows: &[Value], settings: &Settings) -> Result<AssociationScheme> {
    let n = rows.len();
    let mut labels = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| Error::Parse(format!("label rows must have {n} entries")))?;
        for x in row {
            let l = x
                .as_u64()
                .filter(|&l| l < n as u64 * n as u64)
                .ok_or_else(|| Error::Parse(format!("bad class label {x}")))?;
            labels.push(l as usize);
        }
    }
    let d = labels.iter().copied().max().unwrap_or(0);
    let classes: Vec<Mat> = (0..=d)
        .map(|i| Mat::from_fn(n, |x, y| Scalar::int(i64::from(labels[x * n + y] == i))))
        .collect();
    verify_axioms(&classes, settings)
}

fn check_cap(what: &str, size: u128, settings: &Settings) -> Result<usize> {
    if size > settings.vertex_cap as u128 {
        return Err(Error::CapExceeded {
            what: what.into(),
            size,
            cap: settings.vertex_cap as u128,
        });
    }
    Ok(size as usize)
}

/// H(d, q): words of length d over q letters, classes by Hamming distance.
pub fn hamming_scheme(d: usize, q: usize, settings: &Settings) -> Result<AssociationScheme> {
    if d < 1 || q < 2 {
        return Err(Error::Domain("hamming scheme needs d >= 1 and q >= 2".into()));
    }
    let n = check_cap("q^d", (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX), settings)?;
    let digits = |mut v: usize| -> Vec<usize> {
        let mut out = vec![0; d];
        for slot in out.iter_mut() {
            *slot = v % q;
            v /= q;
        }
        out
    };
    let words: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let mut labels = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            labels[x * n + y] = words[x].iter().zip(&words[y]).filter(|(a, b)| a != b).count() as u16;
        }
    }
    AssociationScheme::from_labels(n, d, labels, &format!("hamming({d},{q})"), settings)
}

/// Compositions of `n` into `parts` non-negative parts in reverse lexicographic order.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Generalised Hamming scheme over a base scheme: vertices are n-tuples, the class
/// of (v, w) is the composition counting coordinates in each base class.
pub fn generalized_hamming(n: usize, base: &AssociationScheme, settings: &Settings) -> Result<AssociationScheme> {
    if n < 1 {
        return Err(Error::Domain("tuple length must be at least 1".into()));
    }
    let b = base.n();
    let size = (b as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let nv = check_cap("|X|^n", size, settings)?;
    let m = base.d() + 1;
    let comps = compositions(n, m);
    let index_of = |c: &[usize]| comps.iter().position(|x| x == c).expect("composition exists");
    let tuple = |mut v: usize| -> Vec<usize> {
        let mut out = vec![0; n];
        for slot in out.iter_mut() {
            *slot = v % b;
            v /= b;
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..nv).map(tuple).collect();
    let mut labels = vec![0u16; nv * nv];
    let mut used = vec![false; comps.len()];
    for x in 0..nv {
        for y in 0..nv {
            let mut c = vec![0; m];
            for t in 0..n {
                c[base.label(tuples[x][t], tuples[y][t])] += 1;
            }
            let k = index_of(&c);
            used[k] = true;
            labels[x * nv + y] = k as u16;
        }
    }
    // Drop compositions that never occur (cannot happen for a genuine base scheme).
    let remap: Vec<usize> = used
        .iter()
        .scan(0usize, |acc, &u| {
            let r = *acc;
            if u {
                *acc += 1;
            }
            Some(r)
        })
        .collect();
    for l in labels.iter_mut() {
        *l = remap[*l as usize] as u16;
    }
    let d = used.iter().filter(|&&u| u).count() - 1;
    AssociationScheme::from_labels(nv, d, labels, &format!("generalized_hamming({n})"), settings)
}

/// The class compositions used by [`generalized_hamming`], in class order.
pub fn generalized_hamming_class_labels(n: usize, base_classes: usize) -> Vec<Vec<usize>> {
    compositions(n, base_classes)
}

/// Translation scheme of an abelian group given by its multiplication table
/// (`table[a][b]` = index of a·b). A_g[x][y] = 1 iff x = y·g; the identity
/// element's class comes first, the others in table order.
pub fn group_scheme(table: &[Vec<usize>], settings: &Settings) -> Result<AssociationScheme> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    check_cap("group order", n as u128, settings)?;
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(format!("row {a} has length {} not {n}", row.len())));
        }
        let mut seen = vec![false; n];
        for &v in row {
            if v >= n || seen[v] {
                return Err(Error::NotAGroup(format!("row {a} is not a permutation")));
            }
            seen[v] = true;
        }
    }
    let e = (0..n)
        .find(|&a| (0..n).all(|b| table[a][b] == b && table[b][a] == b))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for a in 0..n {
        for b in 0..n {
            if table[a][b] != table[b][a] {
                return Err(Error::NotAGroup(format!("not abelian: {a}*{b} != {b}*{a}")));
            }
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
    }
    let mut class_of = vec![0usize; n];
    let mut next = 1;
    for g in 0..n {
        if g == e {
            class_of[g] = 0;
        } else {
            class_of[g] = next;
            next += 1;
        }
    }
    let mut labels = vec![0u16; n * n];
    for y in 0..n {
        for g in 0..n {
            let x = table[y][g];
            labels[x * n + y] = class_of[g] as u16;
        }
    }
    AssociationScheme::from_labels(n, n - 1, labels, "group", settings)
}

/// Multiplication table of the cyclic group Z_n.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Distance scheme of a connected graph given by a 0/1 adjacency matrix.
pub fn distance_scheme(adj: &Mat, settings: &Settings) -> Result<AssociationScheme> {
    let dist = crate::ifs::distance_matrix(adj)?;
    let n = adj.n();
    let d = dist.iter().copied().max().unwrap_or(0);
    let labels = dist.iter().map(|&v| v as u16).collect();
    AssociationScheme::from_labels(n, d, labels, "distance_graph", settings)
}

/// Transition probability (i−1)/(2i) to level i−1, (i+1)/(2i) to level i+1, else 0.
pub fn su2_clebsch_gordan(i: u64, j: u64) -> Result<Rational> {
    if i == 0 {
        return Err(Error::Domain("level index must be at least 1".into()));
    }
    let den = BigInt::from(2 * i);
    Ok(if j + 1 == i {
        Rational::new(BigInt::from(i - 1), den)
    } else if j == i + 1 {
        Rational::new(BigInt::from(i + 1), den)
    } else {
        Rational::from_integer(BigInt::from(0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(n: usize) -> AssociationScheme {
        let id = Mat::identity(n);
        let rest = Mat::ones(n).sub(&id).unwrap();
        verify_axioms(&[id, rest], &Settings::default()).unwrap()
    }

    #[test]
    fn trivial_scheme_on_three_points() {
        let s = trivial(3);
        assert!(s.is_commutative());
        assert_eq!(s.d(), 1);
        let p = s.intersection_numbers();
        assert_eq!(p[0][1][1], 2);
        assert_eq!(p[1][1][1], 1);
    }

    #[test]
    fn trivial_intersection_formula() {
        for n in 2..7 {
            let p = trivial(n).intersection_numbers().clone();
            assert_eq!(p[0][1][1], n as i64 - 1);
            assert_eq!(p[1][1][1], n as i64 - 2);
            assert_eq!(p[0][0], vec![1, 0]);
        }
    }

    #[test]
    fn trivial_eigenmatrix() {
        let (p, q) = trivial(5).eigenmatrices().unwrap();
        assert_eq!(p, Mat::from_ints(&[&[1, 4], &[1, -1]]));
        assert_eq!(p.mul(&q).unwrap(), Mat::identity(2).scale(&Scalar::int(5)));
    }

    #[test]
    fn trivial_krein_from_projections() {
        // E1 = I - J/3 has E1∘E1 = I/3 + J/9 = (1/3)(2·E0 + 1·E1).
        let k = trivial(3).krein_parameters().unwrap();
        assert_eq!(k.q[0][1][1], Scalar::int(2));
        assert_eq!(k.q[1][1][1], Scalar::int(1));
        assert_eq!(k.q[0][0][0], Scalar::int(1));
        assert!(k.violations.is_empty());
    }

    #[test]
    fn non_symmetric_pair_fails_axiom_three() {
        let id = Mat::identity(3);
        let a = Mat::from_ints(&[&[0, 1, 1], &[0, 0, 1], &[0, 0, 0]]);
        let b = Mat::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]);
        let err = verify_axioms(&[id.clone(), a.clone(), b], &Settings::default());
        assert!(matches!(err, Err(Error::Axiom { axiom: 3, .. }) | Err(Error::Axiom { axiom: 4, .. })));
        let err = verify_axioms(&[id.clone(), a.clone()], &Settings::default());
        assert!(matches!(err, Err(Error::Axiom { axiom: 3, .. })));
        let c = Mat::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let err = verify_axioms(&[id, c], &Settings::default());
        assert!(matches!(err, Err(Error::Axiom { axiom: 2, .. })));
    }

    #[test]
    fn missing_identity() {
        let err = verify_axioms(&[Mat::ones(2)], &Settings::default());
        assert!(matches!(err, Err(Error::Axiom { axiom: 1, .. })));
    }

    #[test]
    fn z3_group_scheme_matches_display() {
        let s = group_scheme(&cyclic_table(3), &Settings::default()).unwrap();
        assert_eq!(s.class(1), Mat::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(s.class(2), Mat::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(group_scheme(&[vec![0]], &Settings::default()).unwrap().classes(), vec![Mat::identity(1)]);
    }

    #[test]
    fn group_table_rejected() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(group_scheme(&bad, &Settings::default()), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn hamming_two_two() {
        let s = hamming_scheme(2, 2, &Settings::default()).unwrap();
        assert_eq!(s.valencies(), vec![1, 2, 1]);
        let dual = s.self_duality_check().unwrap();
        assert!(dual.is_self_dual);
        let mut ranks = s.spectral().unwrap().multiplicities.clone();
        ranks.sort();
        assert_eq!(ranks, vec![1, 1, 2]);
    }

    #[test]
    fn cube_intersection_array() {
        let s = hamming_scheme(3, 2, &Settings::default()).unwrap();
        let p = s.intersection_numbers();
        for n in 0..=3usize {
            // c_n = p^n_{1,n-1}, b_n = p^n_{1,n+1}
            if n >= 1 {
                assert_eq!(p[n][1][n - 1], n as i64);
            }
            if n < 3 {
                assert_eq!(p[n][1][n + 1], 3 - n as i64);
            }
        }
    }

    #[test]
    fn hamming_cap() {
        let s = Settings {
            vertex_cap: 100,
            ..Settings::default()
        };
        assert!(matches!(hamming_scheme(7, 2, &s), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn compositions_order() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(2, 3)[0], vec![2, 0, 0]);
    }

    #[test]
    fn generalized_hamming_matches_hamming() {
        let base = trivial(2);
        let g = generalized_hamming(2, &base, &Settings::default()).unwrap();
        let h = hamming_scheme(2, 2, &Settings::default()).unwrap();
        assert_eq!(g.valencies(), h.valencies());
        assert_eq!(g.intersection_numbers(), h.intersection_numbers());
        let one = generalized_hamming(1, &trivial(4), &Settings::default()).unwrap();
        assert_eq!(one.intersection_numbers(), trivial(4).intersection_numbers());
    }

    #[test]
    fn five_point_trivial_scheme_is_self_dual() {
        let r = trivial(5).self_duality_check().unwrap();
        assert!(r.is_self_dual);
        assert_eq!(r.permutation, Some(vec![0, 1]));
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn hypergroup_on_trivial_scheme() {
        let h = trivial(3).hypergroup_coefficients().unwrap();
        assert_eq!(h.residual, 0.0);
        // c^k_ij = m_k q^k_ij / (|X| m_i m_j) with m = (1, 2), q^0_11 = 2, q^1_11 = 1
        assert_eq!(h.c[0][1][1], Scalar::ratio(1, 6));
        assert_eq!(h.c[1][1][1], Scalar::ratio(1, 6));
        assert_eq!(h.c[1][0][1], Scalar::ratio(1, 3));
    }

    #[test]
    fn clebsch_gordan_values() {
        let r = |p: i64, q: i64| Rational::new(BigInt::from(p), BigInt::from(q));
        assert_eq!(su2_clebsch_gordan(2, 1).unwrap(), r(1, 4));
        assert_eq!(su2_clebsch_gordan(2, 3).unwrap(), r(3, 4));
        assert_eq!(su2_clebsch_gordan(5, 5).unwrap(), r(0, 1));
        assert!(su2_clebsch_gordan(0, 1).is_err());
    }
}
