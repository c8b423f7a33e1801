//! Built-in objects with golden expected values.
//!
//! Entries are JSON files under `catalog/`, compiled into the binary. Setting
//! `SCHEMESPINLAB_CATALOG` to a directory makes `get` read `<dir>/<id>.json` instead.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactalg::json::mat_from_json;
use crate::exactalg::linalg::same_span;
use crate::exactalg::{Mat, Scalar};
use crate::qleonard::{is_leonard_pair, LeonardPairCandidate, Verdict};
use crate::scheme::{scheme_from_json, AssociationScheme};
use crate::settings::Settings;
use crate::spinmodel::{is_type_ii, is_type_iii, modular_invariance_check, nomura_algebra, potts_spin_model};
use crate::tlbraid::commuting_square_check;

pub const CATALOG_ENV: &str = "SCHEMESPINLAB_CATALOG";

const EMBEDDED: &[(&str, &str)] = &[
    ("W1", include_str!("../catalog/W1.json")),
    ("W2", include_str!("../catalog/W2.json")),
    ("W3", include_str!("../catalog/W3.json")),
    ("z3", include_str!("../catalog/z3.json")),
    ("z4", include_str!("../catalog/z4.json")),
    ("klein4_displayed", include_str!("../catalog/klein4_displayed.json")),
    ("scheme16", include_str!("../catalog/scheme16.json")),
    ("potts3", include_str!("../catalog/potts3.json")),
    ("leonard4", include_str!("../catalog/leonard4.json")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Matrix,
    Scheme,
    LeonardPair,
    SpinModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Copied from a published display.
    PublishedDisplay,
    /// Computed independently of any display.
    IndependentComputation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expected {
    pub value: Value,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superscript_map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub version: u32,
    pub kind: Kind,
    pub description: String,
    pub payload: Value,
    pub expected: BTreeMap<String, Expected>,
}

impl CatalogEntry {
    pub fn from_json_str(text: &str) -> Result<CatalogEntry> {
        Ok(serde_json::from_str(text)?)
    }

    fn require(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Precondition(format!("{} is a {:?}, not a {kind:?}", self.id, self.kind)));
        }
        Ok(())
    }

    fn field(&self, name: &str) -> Result<&Value> {
        self.payload
            .get(name)
            .ok_or_else(|| Error::Parse(format!("{} payload lacks \"{name}\"", self.id)))
    }

    pub fn matrix(&self) -> Result<Mat> {
        self.require(Kind::Matrix)?;
        mat_from_json(self.field("matrix")?)
    }

    pub fn scheme(&self, settings: &Settings) -> Result<AssociationScheme> {
        self.require(Kind::Scheme)?;
        scheme_from_json(&self.payload, settings)
    }

    pub fn leonard_pair(&self) -> Result<LeonardPairCandidate> {
        self.require(Kind::LeonardPair)?;
        LeonardPairCandidate::new(mat_from_json(self.field("a")?)?, mat_from_json(self.field("b")?)?)
    }

    pub fn potts_n(&self) -> Result<usize> {
        self.require(Kind::SpinModel)?;
        self.field("n")?
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::Parse("\"n\" must be an integer".into()))
    }
}

/// Entry ids: the built-in set, or the `*.json` stems of the override directory (sorted).
pub fn list() -> Vec<String> {
    if let Some(dir) = override_dir() {
        let mut ids: Vec<String> = std::fs::read_dir(dir)
            .into_iter()
            .flatten()
            .flatten()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .filter_map(|p| p.file_stem().and_then(|s| s.to_str()).map(String::from))
            .collect();
        ids.sort();
        return ids;
    }
    EMBEDDED.iter().map(|(id, _)| id.to_string()).collect()
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from)
}

pub fn get(id: &str) -> Result<CatalogEntry> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{id}.json"));
        if !path.exists() {
            return Err(Error::UnknownId(id.to_string()));
        }
        let text = std::fs::read_to_string(&path)?;
        return CatalogEntry::from_json_str(&text);
    }
    let text = EMBEDDED
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownId(id.to_string()))?;
    CatalogEntry::from_json_str(text)
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenCheck {
    pub property: String,
    pub provenance: Provenance,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<GoldenCheck>,
}

fn expect_bool(e: &Expected) -> Result<bool> {
    e.value
        .as_bool()
        .ok_or_else(|| Error::Parse("expected value must be a boolean".into()))
}

fn expect_usizes(v: &Value) -> Result<Vec<usize>> {
    serde_json::from_value(v.clone()).map_err(Error::from)
}

fn bool_check(actual: bool, e: &Expected) -> Result<(bool, String)> {
    let want = expect_bool(e)?;
    Ok((actual == want, format!("computed {actual}, expected {want}")))
}

fn check_matrix(entry: &CatalogEntry, prop: &str, e: &Expected, s: &Settings) -> Result<(bool, String)> {
    let w = entry.matrix()?;
    match prop {
        "type_ii" => {
            let r = is_type_ii(&w, s)?;
            let (ok, d) = bool_check(r.holds, e)?;
            Ok((ok, format!("{d}; residual {:e}", r.residual)))
        }
        "schur_inverse" => {
            let want = mat_from_json(&e.value)?;
            let got = w.schur_inverse()?;
            let dev = got.residual(&want)?;
            Ok((dev == 0.0, format!("max deviation {dev:e}")))
        }
        "type_iii" => {
            let holds = match is_type_iii(&w, s) {
                Ok(r) => r.holds,
                Err(Error::Precondition(_)) => false,
                Err(err) => return Err(err),
            };
            bool_check(holds, e)
        }
        "nomura_dimension" => {
            let want = e.value.as_u64().ok_or_else(|| Error::Parse("dimension must be an integer".into()))?;
            let r = nomura_algebra(&w, s)?;
            Ok((r.dimension as u64 == want, format!("dimension {}, expected {want}", r.dimension)))
        }
        "nomura_spans" => {
            let other = e.value.as_str().ok_or_else(|| Error::Parse("expected a catalog id".into()))?;
            let classes = get(other)?.scheme(s)?.classes();
            let r = nomura_algebra(&w, s)?;
            let ok = same_span(&r.basis, &classes, s.eps);
            Ok((ok, format!("span of Nomura basis equals span of {other} classes: {ok}")))
        }
        "commuting_square" => {
            let r = commuting_square_check(&w, s)?;
            let (ok, d) = bool_check(r.pass, e)?;
            Ok((ok, format!("{d}; residual {:e}", r.residual)))
        }
        _ => Err(Error::Parse(format!("unknown matrix property {prop}"))),
    }
}

fn check_scheme(entry: &CatalogEntry, prop: &str, e: &Expected, s: &Settings) -> Result<(bool, String)> {
    let scheme = match entry.scheme(s) {
        Ok(x) => x,
        Err(err) if prop == "is_scheme" => return bool_check(false, e).map(|(ok, _)| (ok, err.to_string())),
        Err(err) => return Err(err),
    };
    match prop {
        "is_scheme" => bool_check(true, e),
        "valencies" => {
            let want = expect_usizes(&e.value)?;
            let got = scheme.valencies();
            Ok((got == want, format!("valencies {got:?}, expected {want:?}")))
        }
        "commutative" => bool_check(scheme.is_commutative(), e),
        "symmetric" => bool_check((0..=scheme.d()).all(|j| scheme.transpose_index(j) == j), e),
        "intersection_numbers" => {
            let display: Vec<Vec<Vec<i64>>> = serde_json::from_value(e.value.clone())?;
            let map = e.superscript_map.clone().unwrap_or_else(|| (0..display.len()).collect());
            let p = scheme.intersection_numbers();
            if display.len() != p.len() || map.len() != p.len() || map.iter().any(|&k| k >= p.len()) {
                return Ok((false, "display has the wrong number of matrices".into()));
            }
            let mut worst = 0i64;
            for (t, shown) in display.iter().enumerate() {
                let k = map[t];
                for (i, row) in shown.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let got = p[k].get(i).and_then(|r| r.get(j)).copied().unwrap_or(i64::MAX);
                        worst = worst.max((got - v).abs());
                    }
                }
            }
            Ok((worst == 0, format!("max deviation {worst} under superscript map {map:?}")))
        }
        "krein_equals_intersection" => {
            let q = scheme.krein_parameters()?.q;
            let p = scheme.intersection_numbers();
            let mut worst = 0.0f64;
            let mut exact = true;
            for (k, pk) in p.iter().enumerate() {
                for (i, row) in pk.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        exact &= q[k][i][j].is_exact();
                        worst = worst.max((&q[k][i][j] - &Scalar::int(*v)).abs());
                    }
                }
            }
            let (ok, d) = bool_check(worst == 0.0 && exact, e)?;
            Ok((ok, format!("{d}; max |q - p| {worst:e}, exact {exact}")))
        }
        "self_dual_identity" => {
            let r = scheme.self_duality_check()?;
            let identity = (0..=scheme.d()).collect::<Vec<_>>();
            bool_check(r.identity_deviation == 0.0 && r.is_self_dual && r.permutation.is_some_and(|p| p == identity), e)
        }
        _ => Err(Error::Parse(format!("unknown scheme property {prop}"))),
    }
}

fn check_spin(entry: &CatalogEntry, prop: &str, e: &Expected, s: &Settings) -> Result<(bool, String)> {
    let n = entry.potts_n()?;
    let report = potts_spin_model(n, s)?;
    match prop {
        "t_plus_inverse" => {
            let want = e.value.as_i64().ok_or_else(|| Error::Parse("expected an integer".into()))?;
            let all = report.solutions.iter().all(|sol| {
                sol.t.is_exact() && sol.t.inv().is_some_and(|ti| (&sol.t + &ti).eq_tol(&Scalar::int(want), 0.0))
            });
            Ok((all, format!("t + 1/t = {want} exactly for every root: {all}")))
        }
        "type_ii" => bool_check(report.solutions.iter().all(|x| x.type_ii.holds && x.type_ii.residual == 0.0), e),
        "type_iii" => bool_check(report.solutions.iter().any(|x| x.type_iii.holds), e),
        "modular_proportional" => {
            let mut detail = String::new();
            let mut any = false;
            for sol in report.solutions.iter().filter(|x| x.type_iii.holds) {
                if let Some(model) = &sol.model {
                    let scheme = crate::spinmodel::trivial_scheme(n, s)?;
                    let (p, _) = scheme.eigenmatrices()?;
                    let r = modular_invariance_check(&p, &model.t_diag, Some(model), s)?;
                    any |= r.raw.proportional;
                    detail = format!("(PT)^3 = mu I with mu = {}", r.raw.mu.clone().unwrap_or_default());
                }
            }
            let (ok, d) = bool_check(any, e)?;
            Ok((ok, format!("{d}; {detail}")))
        }
        _ => Err(Error::Parse(format!("unknown spin model property {prop}"))),
    }
}

fn check_leonard(entry: &CatalogEntry, prop: &str, e: &Expected, s: &Settings) -> Result<(bool, String)> {
    match prop {
        "is_leonard_pair" => {
            let r = is_leonard_pair(&entry.leonard_pair()?, s)?;
            let (ok, d) = bool_check(r.verdict == Verdict::Holds, e)?;
            Ok((ok, format!("{d}; verdict {:?}", r.verdict)))
        }
        _ => Err(Error::Parse(format!("unknown Leonard pair property {prop}"))),
    }
}

/// Recomputes every expected property of an entry with the owning module.
pub fn run_golden(id: &str, settings: &Settings) -> Result<GoldenReport> {
    let entry = get(id)?;
    let mut checks = Vec::new();
    for (prop, e) in &entry.expected {
        let outcome = match entry.kind {
            Kind::Matrix => check_matrix(&entry, prop, e, settings),
            Kind::Scheme => check_scheme(&entry, prop, e, settings),
            Kind::SpinModel => check_spin(&entry, prop, e, settings),
            Kind::LeonardPair => check_leonard(&entry, prop, e, settings),
        };
        let (pass, detail) = match outcome {
            Ok(x) => x,
            Err(err) => (false, format!("error: {err}")),
        };
        checks.push(GoldenCheck {
            property: prop.clone(),
            provenance: e.provenance,
            pass,
            detail,
        });
    }
    Ok(GoldenReport {
        id: id.to_string(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_embedded_entry_parses() {
        for id in list() {
            let e = get(&id).unwrap();
            assert_eq!(e.id, id);
            assert!(!e.expected.is_empty());
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(get("nosuch").unwrap_err(), Error::UnknownId("nosuch".into()));
    }

    #[test]
    fn w2_payload() {
        let w = get("W2").unwrap().matrix().unwrap();
        assert_eq!(w.get(0, 1), &Scalar::zeta(3, 1));
        assert_eq!(w.get(0, 0), &Scalar::one());
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(get("W1").unwrap().scheme(&Settings::default()).is_err());
    }

    #[test]
    fn goldens() {
        for id in list() {
            let r = run_golden(&id, &Settings::default()).unwrap();
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
            assert!(r.pass, "{id}: {failed:?}");
        }
    }
}
