//! Temperley-Lieb diagrams, braid generators, the Markov trace and commuting squares.
//!
//! A diagram on n strands has top points 0..n and bottom points n..2n, both read
//! left to right. In a product xy the diagram x sits on top of y.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::json::{scalar_from_json, scalar_to_json};
use crate::exactalg::scalar::four_cos_sq_pi_over;
use crate::exactalg::{Mat, Scalar};
use crate::settings::Settings;
use crate::spinmodel::is_type_ii;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TLDiagram {
    n: usize,
    /// `pairing[p]` is the point joined to p.
    pairing: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

impl TLDiagram {
    pub fn new(n: usize, pairing: Vec<usize>) -> Result<TLDiagram> {
        if pairing.len() != 2 * n {
            return Err(Error::Dimension(format!("{} points for {n} strands", pairing.len())));
        }
        for (p, &q) in pairing.iter().enumerate() {
            if q >= 2 * n || q == p || pairing[q] != p {
                return Err(Error::Domain(format!("point {p} is not matched consistently")));
            }
        }
        let d = TLDiagram { n, pairing };
        if !d.is_planar() {
            return Err(Error::Domain("pairing has crossing strands".into()));
        }
        Ok(d)
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<TLDiagram> {
        let mut pairing = vec![usize::MAX; 2 * n];
        for &(p, q) in pairs {
            if p >= 2 * n || q >= 2 * n || pairing[p] != usize::MAX || pairing[q] != usize::MAX {
                return Err(Error::Domain(format!("bad pair ({p},{q})")));
            }
            pairing[p] = q;
            pairing[q] = p;
        }
        if pairing.contains(&usize::MAX) {
            return Err(Error::Domain("some boundary point is unmatched".into()));
        }
        TLDiagram::new(n, pairing)
    }

    pub fn identity(n: usize) -> TLDiagram {
        TLDiagram {
            n,
            pairing: (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect(),
        }
    }

    /// E_i for 1 ≤ i < n: cup and cap joining strands i and i+1.
    pub fn cup_cap(n: usize, i: usize) -> Result<TLDiagram> {
        if i == 0 || i >= n {
            return Err(Error::Domain(format!("E_{i} needs 1 <= i < {n}")));
        }
        let mut d = TLDiagram::identity(n);
        let (a, b) = (i - 1, i);
        d.pairing[a] = b;
        d.pairing[b] = a;
        d.pairing[n + a] = n + b;
        d.pairing[n + b] = n + a;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&p| p < self.pairing[p])
            .map(|p| (p, self.pairing[p]))
            .collect()
    }

    /// Position around the boundary circle: top left to right, then bottom right to left.
    fn position(&self, p: usize) -> usize {
        if p < self.n {
            p
        } else {
            3 * self.n - 1 - p
        }
    }

    pub fn is_planar(&self) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .pairs()
            .into_iter()
            .map(|(p, q)| {
                let (a, b) = (self.position(p), self.position(q));
                (a.min(b), a.max(b))
            })
            .collect();
        arcs.iter()
            .all(|&(a, b)| arcs.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    }

    /// Stacks `self` on top of `other`; returns the diagram and the number of closed loops.
    pub fn compose(&self, other: &TLDiagram) -> Result<(TLDiagram, usize)> {
        let n = self.n;
        if other.n != n {
            return Err(Error::StrandMismatch(n, other.n));
        }
        // nodes 0..2n are self's points, 2n..4n are other's points
        let mut parent: Vec<usize> = (0..4 * n).collect();
        for p in 0..2 * n {
            union(&mut parent, p, self.pairing[p]);
            union(&mut parent, 2 * n + p, 2 * n + other.pairing[p]);
        }
        for i in 0..n {
            union(&mut parent, n + i, 2 * n + i);
        }
        // external points: self's top (0..n) and other's bottom (3n..4n)
        let external = |x: usize| -> usize { if x < n { x } else { x - 2 * n } };
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in (0..n).chain(3 * n..4 * n) {
            by_root.entry(find(&mut parent, x)).or_default().push(external(x));
        }
        let mut pairing = vec![0; 2 * n];
        for pts in by_root.values() {
            pairing[pts[0]] = pts[1];
            pairing[pts[1]] = pts[0];
        }
        let mut loop_roots: Vec<usize> = (n..3 * n)
            .map(|x| find(&mut parent, x))
            .filter(|r| !by_root.contains_key(r))
            .collect();
        loop_roots.sort_unstable();
        loop_roots.dedup();
        Ok((TLDiagram { n, pairing }, loop_roots.len()))
    }

    /// Loops in the closure joining top point i to bottom point i.
    pub fn closure_loops(&self) -> usize {
        let n = self.n;
        let mut parent: Vec<usize> = (0..2 * n).collect();
        for p in 0..2 * n {
            union(&mut parent, p, self.pairing[p]);
        }
        for i in 0..n {
            union(&mut parent, i, n + i);
        }
        let mut roots: Vec<usize> = (0..2 * n).map(|x| find(&mut parent, x)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// All planar diagrams on n strands (Catalan(n) of them).
pub fn enumerate_diagrams(n: usize) -> Vec<TLDiagram> {
    fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in (1..points.len()).step_by(2) {
            for inner in matchings(&points[1..k]) {
                for outer in matchings(&points[k + 1..]) {
                    let mut m = vec![(points[0], points[k])];
                    m.extend(inner.iter().copied());
                    m.extend(outer);
                    out.push(m);
                }
            }
        }
        out
    }
    let positions: Vec<usize> = (0..2 * n).collect();
    let to_point = |pos: usize| if pos < n { pos } else { 3 * n - 1 - pos };
    let mut diagrams: Vec<TLDiagram> = matchings(&positions)
        .into_iter()
        .map(|m| {
            let mut pairing = vec![0; 2 * n];
            for (a, b) in m {
                let (p, q) = (to_point(a), to_point(b));
                pairing[p] = q;
                pairing[q] = p;
            }
            TLDiagram { n, pairing }
        })
        .collect();
    diagrams.sort();
    diagrams
}

#[derive(Debug, Clone, PartialEq)]
pub struct TLElement {
    n: usize,
    delta: Scalar,
    terms: BTreeMap<TLDiagram, Scalar>,
}

impl TLElement {
    pub fn zero(n: usize, delta: &Scalar) -> TLElement {
        TLElement {
            n,
            delta: delta.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn diagram(d: TLDiagram, coeff: Scalar, delta: &Scalar) -> TLElement {
        let mut e = TLElement::zero(d.n, delta);
        e.add_term(d, coeff);
        e
    }

    pub fn identity(n: usize, delta: &Scalar) -> TLElement {
        TLElement::diagram(TLDiagram::identity(n), Scalar::one(), delta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn terms(&self) -> &BTreeMap<TLDiagram, Scalar> {
        &self.terms
    }

    fn add_term(&mut self, d: TLDiagram, coeff: Scalar) {
        let sum = match self.terms.remove(&d) {
            Some(c) => &c + &coeff,
            None => coeff,
        };
        if !sum.is_zero_tol(0.0) {
            self.terms.insert(d, sum);
        }
    }

    fn check_compatible(&self, other: &TLElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::StrandMismatch(self.n, other.n));
        }
        if !self.delta.eq_tol(&other.delta, 1e-12) {
            return Err(Error::Precondition("elements use different loop parameters".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TLElement) -> Result<TLElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> TLElement {
        let mut out = TLElement::zero(self.n, &self.delta);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &TLElement) -> Result<TLElement> {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn compose(&self, other: &TLElement) -> Result<TLElement> {
        self.check_compatible(other)?;
        let mut out = TLElement::zero(self.n, &self.delta);
        for (dx, cx) in &self.terms {
            for (dy, cy) in &other.terms {
                let (d, loops) = dx.compose(dy)?;
                let weight = self.delta.pow(loops as i64).expect("nonnegative power");
                out.add_term(d, &(cx * cy) * &weight);
            }
        }
        Ok(out)
    }

    /// Largest coefficient modulus; 0 for the zero element.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn is_exact(&self) -> bool {
        self.delta.is_exact() && self.terms.values().all(Scalar::is_exact)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(d, c)| {
                json!({
                    "pairing": d.pairs().iter().map(|&(p, q)| json!([p, q])).collect::<Vec<_>>(),
                    "coeff": scalar_to_json(c),
                })
            })
            .collect();
        json!({"n": self.n, "delta": scalar_to_json(&self.delta), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<TLElement> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("element needs integer \"n\"".into()))? as usize;
        let delta = scalar_from_json(v.get("delta").ok_or_else(|| Error::Parse("element needs \"delta\"".into()))?)?;
        let mut out = TLElement::zero(n, &delta);
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("element needs a \"terms\" array".into()))?;
        for t in terms {
            let pairs = t
                .get("pairing")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term needs a \"pairing\" array".into()))?;
            let mut list = Vec::with_capacity(pairs.len());
            for p in pairs {
                let pq = p.as_array().filter(|a| a.len() == 2);
                let get = |i: usize| pq.and_then(|a| a[i].as_u64()).map(|x| x as usize);
                match (get(0), get(1)) {
                    (Some(a), Some(b)) => list.push((a, b)),
                    _ => return Err(Error::Parse("pairing entries must be [p, q]".into())),
                }
            }
            let coeff = match t.get("coeff") {
                Some(c) => scalar_from_json(c)?,
                None => Scalar::one(),
            };
            out.add_term(TLDiagram::from_pairs(n, &list)?, coeff);
        }
        Ok(out)
    }
}

/// Normalised trace: a diagram contributes δ^{loops(closure) − n}, so tr(1) = 1.
pub fn markov_trace(x: &TLElement) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (d, c) in &x.terms {
        let e = d.closure_loops() as i64 - x.n as i64;
        let w = x
            .delta
            .pow(e)
            .ok_or_else(|| Error::Domain("delta = 0 has no negative powers".into()))?;
        total = &total + &(c * &w);
    }
    Ok(total)
}

/// e_1..e_{n−1} with e_i = E_i/δ.
pub fn tl_generators(n: usize, delta: &Scalar) -> Result<Vec<TLElement>> {
    let inv = delta
        .inv()
        .ok_or_else(|| Error::Domain("delta must be nonzero".into()))?;
    (1..n)
        .map(|i| Ok(TLElement::diagram(TLDiagram::cup_cap(n, i)?, inv.clone(), delta)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TLRelationsReport {
    pub n: usize,
    pub lambda: String,
    /// max over i of |e_i² − e_i|
    pub idempotent: f64,
    /// max over i of |e_i* − e_i| (diagram flip with conjugated coefficients)
    pub self_adjoint: f64,
    /// max over |i − j| = 1 of |e_i e_j e_i − λ⁻¹ e_i|
    pub adjacent: f64,
    /// max over |i − j| ≥ 2 of |e_i e_j − e_j e_i|
    pub distant: f64,
    pub exact: bool,
}

impl TLRelationsReport {
    pub fn max_residual(&self) -> f64 {
        [self.idempotent, self.self_adjoint, self.adjacent, self.distant]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn adjoint(x: &TLElement) -> TLElement {
    let n = x.n;
    let flip = |p: usize| if p < n { p + n } else { p - n };
    let mut out = TLElement::zero(n, &x.delta);
    for (d, c) in &x.terms {
        let mut pairing = vec![0; 2 * n];
        for p in 0..2 * n {
            pairing[flip(p)] = flip(d.pairing[p]);
        }
        out.add_term(TLDiagram { n, pairing }, c.conj());
    }
    out
}

pub fn verify_tl_relations(n: usize, delta: &Scalar) -> Result<TLRelationsReport> {
    if n < 2 {
        return Err(Error::Domain("need at least two strands".into()));
    }
    let e = tl_generators(n, delta)?;
    let lambda = delta * delta;
    let lambda_inv = lambda.inv().ok_or_else(|| Error::Domain("lambda = 0".into()))?;
    let mut report = TLRelationsReport {
        n,
        lambda: lambda.to_string(),
        idempotent: 0.0,
        self_adjoint: 0.0,
        adjacent: 0.0,
        distant: 0.0,
        exact: true,
    };
    for (i, ei) in e.iter().enumerate() {
        let sq = ei.compose(ei)?.sub(ei)?;
        report.exact &= sq.is_exact();
        report.idempotent = report.idempotent.max(sq.max_abs());
        report.self_adjoint = report.self_adjoint.max(adjoint(ei).sub(ei)?.max_abs());
        for (j, ej) in e.iter().enumerate() {
            if i.abs_diff(j) == 1 {
                let r = ei.compose(ej)?.compose(ei)?.sub(&ei.scale(&lambda_inv))?;
                report.adjacent = report.adjacent.max(r.max_abs());
            } else if i.abs_diff(j) >= 2 {
                let r = ei.compose(ej)?.sub(&ej.compose(ei)?)?;
                report.distant = report.distant.max(r.max_abs());
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BraidRepresentation {
    pub delta: Scalar,
    pub generators: Vec<TLElement>,
    pub inverses: Vec<TLElement>,
    pub report: BraidReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct BraidReport {
    pub n: usize,
    pub delta: String,
    /// max |g_i g_{i+1} g_i − g_{i+1} g_i g_{i+1}|
    pub braid: f64,
    /// max over |i − j| ≥ 2 of |g_i g_j − g_j g_i|
    pub distant: f64,
    /// max |g_i g_i⁻¹ − 1|
    pub inverse: f64,
    pub exact: bool,
}

impl BraidReport {
    pub fn max_residual(&self) -> f64 {
        [self.braid, self.distant, self.inverse].into_iter().fold(0.0, f64::max)
    }
}

/// g_i = A·1 + A⁻¹E_i in TL with δ = −A² − A⁻², and g_i⁻¹ = A⁻¹·1 + A·E_i.
pub fn braid_representation(n: usize, a: &Scalar) -> Result<BraidRepresentation> {
    if n < 2 {
        return Err(Error::Domain("need at least two strands".into()));
    }
    let a_inv = a.inv().ok_or_else(|| Error::Domain("A must be nonzero".into()))?;
    let delta = -&(&(a * a) + &(&a_inv * &a_inv));
    let one = TLElement::identity(n, &delta);
    let mut generators = Vec::new();
    let mut inverses = Vec::new();
    for i in 1..n {
        let e = TLElement::diagram(TLDiagram::cup_cap(n, i)?, Scalar::one(), &delta);
        generators.push(one.scale(a).add(&e.scale(&a_inv))?);
        inverses.push(one.scale(&a_inv).add(&e.scale(a))?);
    }
    let mut report = BraidReport {
        n,
        delta: delta.to_string(),
        braid: 0.0,
        distant: 0.0,
        inverse: 0.0,
        exact: generators.iter().all(TLElement::is_exact),
    };
    for (i, gi) in generators.iter().enumerate() {
        report.inverse = report.inverse.max(gi.compose(&inverses[i])?.sub(&one)?.max_abs());
        for (j, gj) in generators.iter().enumerate() {
            if j == i + 1 {
                let l = gi.compose(gj)?.compose(gi)?;
                let r = gj.compose(gi)?.compose(gj)?;
                report.braid = report.braid.max(l.sub(&r)?.max_abs());
            } else if j >= i + 2 {
                report.distant = report.distant.max(gi.compose(gj)?.sub(&gj.compose(gi)?)?.max_abs());
            }
        }
    }
    Ok(BraidRepresentation {
        delta,
        generators,
        inverses,
        report,
    })
}

/// 4cos²(π/n).
pub fn jones_index_values(n: usize) -> Result<Scalar> {
    if n < 3 {
        return Err(Error::Domain(format!("index values start at n = 3, got {n}")));
    }
    let n = u32::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    Ok(four_cos_sq_pi_over(n))
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutingSquareReport {
    pub n: usize,
    pub type_ii: bool,
    pub residual: f64,
    pub pass: bool,
    /// Matrix unit (j, k) with the largest residual when the check fails.
    pub witness: Option<(usize, usize)>,
    pub exact: bool,
}

/// For each matrix unit u: E_D(W⁻¹ E_D(W u W⁻¹) W) against tr(u)·I, with tr normalised.
pub fn commuting_square_check(w: &Mat, settings: &Settings) -> Result<CommutingSquareReport> {
    let n = w.n();
    let type_ii = match is_type_ii(w, settings) {
        Ok(r) => r.holds,
        Err(Error::SchurSingular { .. }) => false,
        Err(e) => return Err(e),
    };
    let winv = w.inverse()?;
    let tol = if w.is_exact() { 0.0 } else { settings.eps };
    let inv_n = Scalar::ratio(1, n as i64);
    let mut worst = (0.0f64, None);
    for j in 0..n {
        for k in 0..n {
            // diagonal of W u_jk W⁻¹
            let dvec: Vec<Scalar> = (0..n).map(|x| w.get(x, j) * winv.get(k, x)).collect();
            for y in 0..n {
                let mut v = Scalar::zero();
                for (x, dx) in dvec.iter().enumerate() {
                    v = &v + &(&(winv.get(y, x) * dx) * w.get(x, y));
                }
                let expected = if j == k { inv_n.clone() } else { Scalar::zero() };
                let r = (&v - &expected).abs();
                if r > worst.0 {
                    worst = (r, Some((j, k)));
                }
            }
        }
    }
    let pass = worst.0 <= tol;
    Ok(CommutingSquareReport {
        n,
        type_ii,
        residual: worst.0,
        pass,
        witness: if pass { None } else { worst.1 },
        exact: w.is_exact(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::golden_ratio;

    fn e(n: usize, i: usize, delta: &Scalar) -> TLElement {
        TLElement::diagram(TLDiagram::cup_cap(n, i).unwrap(), Scalar::one(), delta)
    }

    #[test]
    fn identity_composes_to_identity() {
        let id = TLDiagram::identity(4);
        assert_eq!(id.compose(&id).unwrap(), (id.clone(), 0));
    }

    #[test]
    fn cup_cap_squared_makes_a_loop() {
        let d = Scalar::int(3);
        let e1 = e(2, 1, &d);
        assert_eq!(e1.compose(&e1).unwrap(), e1.scale(&d));
    }

    #[test]
    fn e1_e2_e1_has_no_loop() {
        let d = Scalar::int(5);
        let (e1, e2) = (e(3, 1, &d), e(3, 2, &d));
        assert_eq!(e1.compose(&e2).unwrap().compose(&e1).unwrap(), e1);
    }

    #[test]
    fn crossing_pairing_rejected() {
        // top 0 to bottom 1 and top 1 to bottom 0 cross
        assert!(TLDiagram::from_pairs(2, &[(0, 3), (1, 2)]).is_err());
        assert!(TLDiagram::from_pairs(2, &[(0, 1), (2, 3)]).is_ok());
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_diagrams(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42]);
        assert!(enumerate_diagrams(4).iter().all(TLDiagram::is_planar));
    }

    #[test]
    fn generators_are_idempotent() {
        let g = tl_generators(2, &Scalar::int(7)).unwrap();
        assert_eq!(g[0].compose(&g[0]).unwrap(), g[0]);
        assert!(tl_generators(3, &Scalar::zero()).is_err());
    }

    #[test]
    fn relations_for_golden_ratio_and_two() {
        let r = verify_tl_relations(3, &golden_ratio()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        assert!(r.exact);
        let r = verify_tl_relations(5, &Scalar::int(2)).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        let r = verify_tl_relations(2, &Scalar::ratio(3, 7)).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn e1_e3_commute() {
        let g = tl_generators(4, &Scalar::int(2)).unwrap();
        assert_eq!(g[0].compose(&g[2]).unwrap(), g[2].compose(&g[0]).unwrap());
    }

    #[test]
    fn markov_trace_values() {
        let d = Scalar::int(3);
        assert_eq!(markov_trace(&TLElement::identity(4, &d)).unwrap(), Scalar::one());
        let g = tl_generators(3, &d).unwrap();
        assert_eq!(markov_trace(&g[0]).unwrap(), Scalar::ratio(1, 9));
        let e12 = e(3, 1, &d).compose(&e(3, 2, &d)).unwrap();
        assert_eq!(markov_trace(&e12).unwrap(), Scalar::ratio(1, 9));
    }

    #[test]
    fn braid_at_eighth_root() {
        let b = braid_representation(3, &Scalar::zeta(16, 1)).unwrap();
        assert_eq!(b.report.max_residual(), 0.0);
        assert!(b.delta.eq_tol(&Scalar::approx(-(2f64.sqrt()), 0.0), 1e-12));
        let b = braid_representation(4, &Scalar::zeta(20, 3)).unwrap();
        assert_eq!(b.report.max_residual(), 0.0);
        assert!(b.report.exact);
        let b = braid_representation(2, &Scalar::int(2)).unwrap();
        assert_eq!(b.report.inverse, 0.0);
    }

    #[test]
    fn index_values() {
        assert_eq!(jones_index_values(3).unwrap(), Scalar::int(1));
        assert_eq!(jones_index_values(4).unwrap(), Scalar::int(2));
        assert_eq!(jones_index_values(6).unwrap(), Scalar::int(3));
        assert!(jones_index_values(2).is_err());
    }

    #[test]
    fn commuting_squares() {
        let s = Settings::default();
        let w1 = Mat::from_ints(&[&[1, 1], &[1, -1]]);
        let r = commuting_square_check(&w1, &s).unwrap();
        assert!(r.pass && r.type_ii && r.residual == 0.0);
        let r = commuting_square_check(&Mat::identity(3), &s).unwrap();
        assert!(!r.pass && !r.type_ii);
        assert_eq!(r.witness, Some((0, 0)));
        assert!((r.residual - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let x = e(3, 1, &golden_ratio()).add(&TLElement::identity(3, &golden_ratio()).scale(&Scalar::ratio(1, 2))).unwrap();
        assert_eq!(TLElement::from_json(&x.to_json()).unwrap(), x);
    }
}
