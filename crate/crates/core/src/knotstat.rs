//! Signed state graphs and their spin-model partition functions.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Mat, Scalar};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, Sign)>,
}

impl StateGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, Sign)>) -> Result<StateGraph> {
        if let Some(&(u, v, _)) = edges.iter().find(|(u, v, _)| *u >= vertices || *v >= vertices) {
            return Err(Error::Domain(format!("edge ({u},{v}) leaves the {vertices} vertices")));
        }
        Ok(StateGraph { vertices, edges })
    }

    pub fn from_json(v: &Value) -> Result<StateGraph> {
        let vertices = v
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("graph needs integer \"vertices\"".into()))? as usize;
        let list = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("graph needs an \"edges\" array".into()))?;
        let mut edges = Vec::with_capacity(list.len());
        for e in list {
            let parts = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Parse("edges are [u, v, \"+\"|\"-\"]".into()))?;
            let u = parts[0].as_u64().ok_or_else(|| Error::Parse("edge endpoint must be an integer".into()))?;
            let w = parts[1].as_u64().ok_or_else(|| Error::Parse("edge endpoint must be an integer".into()))?;
            let sign = match parts[2].as_str() {
                Some("+") => Sign::Plus,
                Some("-") => Sign::Minus,
                _ => return Err(Error::Parse("edge sign must be \"+\" or \"-\"".into())),
            };
            edges.push((u as usize, w as usize, sign));
        }
        StateGraph::new(vertices, edges)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|&(u, v, s)| json!([u, v, s.symbol()])).collect::<Vec<_>>(),
        })
    }

    /// Disjoint union, relabelling `other`'s vertices after ours.
    pub fn disjoint_union(&self, other: &StateGraph) -> StateGraph {
        let shift = self.vertices;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v, s)| (u + shift, v + shift, s)));
        StateGraph {
            vertices: self.vertices + other.vertices,
            edges,
        }
    }

    /// Two vertices joined by one + edge and one − edge.
    pub fn canonical_r2() -> StateGraph {
        StateGraph {
            vertices: 2,
            edges: vec![(0, 1, Sign::Plus), (0, 1, Sign::Minus)],
        }
    }

    /// Vertices a, b, x and a summed centre y with edges a–y (+), b–y (+), x–y (−).
    pub fn canonical_star() -> StateGraph {
        StateGraph {
            vertices: 4,
            edges: vec![(0, 3, Sign::Plus), (1, 3, Sign::Plus), (2, 3, Sign::Minus)],
        }
    }

    /// Triangle on a, b, x with edges a–b (+), x–a (−), x–b (−).
    pub fn canonical_triangle() -> StateGraph {
        StateGraph {
            vertices: 3,
            edges: vec![(0, 1, Sign::Plus), (2, 0, Sign::Minus), (2, 1, Sign::Minus)],
        }
    }
}

fn state_count(g: &StateGraph, n: usize, settings: &Settings) -> Result<u64> {
    let total = (n as u128).checked_pow(g.vertices as u32).unwrap_or(u128::MAX);
    if total > settings.state_cap {
        return Err(Error::CapExceeded {
            what: "colorings".into(),
            size: total,
            cap: settings.state_cap,
        });
    }
    Ok(total as u64)
}

const CHUNK: u64 = 4096;

/// Z = Σ_σ Π_e W_sign(e)[σ(u), σ(v)] over all colorings σ: V → {0..n}.
pub fn partition_function(g: &StateGraph, wplus: &Mat, wminus: &Mat, settings: &Settings) -> Result<Scalar> {
    let n = wplus.n();
    if wminus.n() != n {
        return Err(Error::Dimension(format!("W+ is {n}x{n}, W- is {0}x{0}", wminus.n())));
    }
    let total = state_count(g, n, settings)?;
    let weight = |sigma: &[usize]| -> Scalar {
        let mut w = Scalar::one();
        for &(u, v, s) in &g.edges {
            let m = if s == Sign::Plus { wplus } else { wminus };
            w = &w * m.get(sigma[u], sigma[v]);
        }
        w
    };
    let chunks = total.div_ceil(CHUNK);
    let partial: Vec<Scalar> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sigma = vec![0usize; g.vertices];
            let mut acc = Scalar::zero();
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mut rest = idx;
                for s in sigma.iter_mut() {
                    *s = (rest % n as u64) as usize;
                    rest /= n as u64;
                }
                acc = &acc + &weight(&sigma);
            }
            acc
        })
        .collect();
    Ok(partial.iter().fold(Scalar::zero(), |a, b| &a + b))
}

/// Removes one + edge and one − edge joining u and v (either orientation).
pub fn apply_r2(g: &StateGraph, u: usize, v: usize) -> Result<StateGraph> {
    let joins = |&(a, b, _): &(usize, usize, Sign)| (a == u && b == v) || (a == v && b == u);
    let find = |sign: Sign| g.edges.iter().position(|e| joins(e) && e.2 == sign);
    match (find(Sign::Plus), find(Sign::Minus)) {
        (Some(p), Some(m)) => {
            let edges = g
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != p && i != m)
                .map(|(_, e)| *e)
                .collect();
            Ok(StateGraph {
                vertices: g.vertices,
                edges,
            })
        }
        _ => Err(Error::Precondition(format!(
            "vertices {u} and {v} do not share oppositely signed edges"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub moves: Vec<(usize, usize)>,
    pub z_before: String,
    pub z_after: String,
    #[serde(skip)]
    pub before: Scalar,
    #[serde(skip)]
    pub after: Scalar,
    pub vertex_change: i64,
    /// Z_before = Z_after.
    pub raw_equal: bool,
    /// Z_before = √n^{Δvertices}·Z_after.
    pub normalized_equal: bool,
    pub residual: f64,
    pub pass: bool,
}

/// Applies the R2 moves in order and compares partition functions before and after.
pub fn invariance_check(
    g: &StateGraph,
    moves: &[(usize, usize)],
    wplus: &Mat,
    wminus: &Mat,
    settings: &Settings,
) -> Result<InvarianceReport> {
    let mut after_graph = g.clone();
    for &(u, v) in moves {
        after_graph = apply_r2(&after_graph, u, v)?;
    }
    let before = partition_function(g, wplus, wminus, settings)?;
    let after = if moves.is_empty() {
        before.clone()
    } else {
        partition_function(&after_graph, wplus, wminus, settings)?
    };
    let exact = before.is_exact() && after.is_exact();
    let eps = if exact { 0.0 } else { settings.eps * before.abs().max(1.0) };
    let vertex_change = g.vertices as i64 - after_graph.vertices as i64;
    let factor = Scalar::int(wplus.n() as i64)
        .sqrt()
        .pow(vertex_change)
        .unwrap_or_else(Scalar::one);
    let residual = (&before - &after).abs();
    let raw_equal = before.eq_tol(&after, eps);
    Ok(InvarianceReport {
        moves: moves.to_vec(),
        z_before: before.to_string(),
        z_after: after.to_string(),
        normalized_equal: before.eq_tol(&(&factor * &after), eps),
        before,
        after,
        vertex_change,
        raw_equal,
        residual,
        pass: raw_equal,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StarTriangleReport {
    pub z_star: String,
    pub z_triangle: String,
    /// Sign s with Z_star = s·√n·Z_triangle, if any.
    pub sign: Option<i8>,
    pub residual_plus: f64,
    pub residual_minus: f64,
}

/// Compares the canonical star and triangle graphs: Z_star = ±√n·Z_triangle.
pub fn star_triangle_check(wplus: &Mat, wminus: &Mat, settings: &Settings) -> Result<StarTriangleReport> {
    let star = partition_function(&StateGraph::canonical_star(), wplus, wminus, settings)?;
    let tri = partition_function(&StateGraph::canonical_triangle(), wplus, wminus, settings)?;
    let root = Scalar::int(wplus.n() as i64).sqrt();
    let rp = (&star - &(&root * &tri)).abs();
    let rm = (&star + &(&root * &tri)).abs();
    let eps = if star.is_exact() && tri.is_exact() && root.is_exact() {
        0.0
    } else {
        settings.eps * star.abs().max(1.0)
    };
    let sign = if rp <= eps {
        Some(1)
    } else if rm <= eps {
        Some(-1)
    } else {
        None
    };
    Ok(StarTriangleReport {
        z_star: star.to_string(),
        z_triangle: tri.to_string(),
        sign,
        residual_plus: rp,
        residual_minus: rm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn single_vertex() {
        let g = StateGraph::new(1, vec![]).unwrap();
        let w = Mat::ones(3);
        assert_eq!(partition_function(&g, &w, &w, &s()).unwrap(), Scalar::int(3));
    }

    #[test]
    fn all_ones_weight() {
        let g = StateGraph::new(2, vec![(0, 1, Sign::Plus)]).unwrap();
        let w = Mat::ones(2);
        assert_eq!(partition_function(&g, &w, &w, &s()).unwrap(), Scalar::int(4));
    }

    #[test]
    fn opposite_pair_cancels() {
        let wp = Mat::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let wm = wp.schur_inverse().unwrap();
        let z = partition_function(&StateGraph::canonical_r2(), &wp, &wm, &s()).unwrap();
        assert_eq!(z, Scalar::int(9));
        let r = invariance_check(&StateGraph::canonical_r2(), &[(0, 1)], &wp, &wm, &s()).unwrap();
        assert!(r.pass && r.normalized_equal);
    }

    #[test]
    fn unrelated_minus_weights_break_invariance() {
        let wp = Mat::from_ints(&[&[1, 2], &[3, 4]]);
        let wm = Mat::from_ints(&[&[1, 1], &[1, 2]]);
        let r = invariance_check(&StateGraph::canonical_r2(), &[(1, 0)], &wp, &wm, &s()).unwrap();
        assert!(!r.pass);
        assert_ne!(r.z_before, r.z_after);
    }

    #[test]
    fn empty_move_list() {
        let wp = Mat::from_ints(&[&[1, 2], &[3, 4]]);
        let r = invariance_check(&StateGraph::canonical_star(), &[], &wp, &wp, &s()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn r2_rewrites() {
        assert_eq!(apply_r2(&StateGraph::canonical_r2(), 0, 1).unwrap().edges, vec![]);
        let plus_only = StateGraph::new(2, vec![(0, 1, Sign::Plus), (0, 1, Sign::Plus)]).unwrap();
        assert!(apply_r2(&plus_only, 0, 1).is_err());
        let tri = StateGraph::new(3, vec![(0, 1, Sign::Plus), (1, 2, Sign::Plus), (2, 0, Sign::Minus), (1, 0, Sign::Minus)])
            .unwrap();
        let out = apply_r2(&tri, 0, 1).unwrap();
        assert_eq!(out.edges, vec![(1, 2, Sign::Plus), (2, 0, Sign::Minus)]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = StateGraph::new(30, vec![]).unwrap();
        assert!(matches!(
            partition_function(&g, &Mat::ones(3), &Mat::ones(3), &s()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = StateGraph::canonical_triangle();
        assert_eq!(StateGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(StateGraph::from_json(&json!({"vertices": 2, "edges": [[0, 5, "+"]]})).is_err());
        assert!(StateGraph::from_json(&json!({"vertices": 2, "edges": [[0, 1, "x"]]})).is_err());
    }
}
