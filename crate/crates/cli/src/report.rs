//! Deterministic JSON reports.
//!
//! Keys are sorted (serde_json's default map is ordered) and every float is
//! written with 17 significant digits, so identical inputs give identical
//! bytes. Non-finite floats become `null`.

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use stabtherm::liouvillian::GibbsData;
use stabtherm::model::format_rational;
use stabtherm::model_io::serialize_model;
use stabtherm::{BathSpec, Rational, StabilizerModel};

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(format!("{x:.16e}").parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn model_digest(model: &StabilizerModel) -> Value {
    let norm_h = GibbsData::new(model, 0.0).ok().map(|g| g.norm_h());
    let mut m = Map::new();
    m.insert("name".into(), model.name().map_or(Value::Null, |n| Value::String(n.into())));
    m.insert("qubits".into(), Value::from(model.n_qubits()));
    m.insert("terms".into(), Value::from(model.n_generators()));
    m.insert("rank".into(), Value::from(model.rank()));
    m.insert("norm_h".into(), norm_h.as_ref().map_or(Value::Null, rational));
    m.insert("sha256".into(), Value::String(sha256_hex(&serialize_model(model))));
    Value::Object(m)
}

pub fn bath_digest(bath: &BathSpec, model: &StabilizerModel) -> Value {
    let mut m = Map::new();
    m.insert("beta".into(), num(bath.beta()));
    m.insert("preset".into(), Value::String(bath.preset().name().into()));
    m.insert("h_min".into(), bath.h_min(model).map_or(Value::Null, num));
    Value::Object(m)
}

/// A command's output: the JSON document plus a human-readable summary.
pub struct Report {
    pub json: Map<String, Value>,
    pub lines: Vec<String>,
    /// Set when the verification ledger recorded a failure.
    pub ledger_failed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut json = Map::new();
        json.insert("command".into(), Value::String(command.into()));
        let mut tool = Map::new();
        tool.insert("name".into(), Value::String("stabtherm".into()));
        tool.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
        json.insert("tool".into(), Value::Object(tool));
        Report {
            json,
            lines: Vec::new(),
            ledger_failed: false,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.json.clone()))
            .expect("report serializes");
        s.push('\n');
        s
    }
}
