//! The JSON report every command emits, and its schema check.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::settings::{Mode, Settings};

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub name: String,
    /// Non-finite values serialise as null.
    pub value: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64) -> Residual {
        Residual {
            name: name.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub mode: Mode,
    pub seed: u64,
    pub tolerance: f64,
    pub pass: bool,
    pub results: Vec<Value>,
    pub residuals: Vec<Residual>,
    pub provenance: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, settings: &Settings) -> Report {
        let mut provenance = Map::new();
        provenance.insert("tool".into(), Value::from("schemespinlab"));
        provenance.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Report {
            command: command.into(),
            inputs: Map::new(),
            mode: settings.mode,
            seed: settings.seed,
            tolerance: settings.eps,
            pass: true,
            results: Vec::new(),
            residuals: Vec::new(),
            provenance,
            error: None,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// Checks the fields every report carries: command, inputs, mode, results[], residuals[], provenance.
pub fn report_schema_validate(r: &Value) -> bool {
    let Some(obj) = r.as_object() else {
        return false;
    };
    let command_ok = obj.get("command").is_some_and(Value::is_string);
    let inputs_ok = obj.get("inputs").is_some_and(Value::is_object);
    let mode_ok = matches!(obj.get("mode").and_then(Value::as_str), Some("exact" | "approx"));
    let results_ok = obj.get("results").is_some_and(Value::is_array);
    let residuals_ok = obj.get("residuals").and_then(Value::as_array).is_some_and(|rs| {
        rs.iter().all(|x| {
            x.get("name").is_some_and(Value::is_string)
                && x.get("value").is_some_and(|v| v.is_number() || v.is_null())
        })
    });
    let provenance_ok = obj.get("provenance").is_some_and(|p| p.is_object() || p.is_array());
    command_ok && inputs_ok && mode_ok && results_ok && residuals_ok && provenance_ok
}
