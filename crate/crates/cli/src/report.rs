//! Run provenance: tool version, input digests, derived quantities with units,
//! warnings.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::format;

pub const TOOL: &str = "donorspin";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub value: QuantityValue,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantityValue {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<Input>,
    pub parameters: Vec<Quantity>,
    pub results: Vec<Quantity>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn parameter(&mut self, name: &str, value: f64, unit: &str) -> &mut Self {
        self.parameters
            .push(quantity(name, QuantityValue::Num(value), unit));
        self
    }

    pub fn parameter_text(&mut self, name: &str, value: &str) -> &mut Self {
        self.parameters
            .push(quantity(name, QuantityValue::Text(value.to_string()), "-"));
        self
    }

    pub fn result(&mut self, name: &str, value: f64, unit: &str) -> &mut Self {
        self.results
            .push(quantity(name, QuantityValue::Num(value), unit));
        self
    }

    pub fn result_text(&mut self, name: &str, value: &str) -> &mut Self {
        self.results
            .push(quantity(name, QuantityValue::Text(value.to_string()), "-"));
        self
    }

    pub fn warn(&mut self, w: impl Into<String>) -> &mut Self {
        self.warnings.push(w.into());
        self
    }

    pub fn find(&self, name: &str) -> Option<&Quantity> {
        self.results
            .iter()
            .chain(&self.parameters)
            .find(|q| q.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        match self.find(name)?.value {
            QuantityValue::Num(x) => Some(x),
            QuantityValue::Text(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let list = |qs: &[Quantity]| -> Value {
            qs.iter()
                .map(|q| {
                    let value = match &q.value {
                        QuantityValue::Num(x) => format::json_number(*x),
                        QuantityValue::Text(s) => Value::from(s.as_str()),
                    };
                    json!({ "name": q.name, "value": value, "unit": q.unit })
                })
                .collect()
        };
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "inputs": self
                .inputs
                .iter()
                .map(|i| json!({ "path": i.path, "sha256": i.sha256 }))
                .collect::<Vec<_>>(),
            "parameters": list(&self.parameters),
            "results": list(&self.results),
            "warnings": self.warnings,
        })
    }
}

fn quantity(name: &str, value: QuantityValue, unit: &str) -> Quantity {
    Quantity {
        name: name.to_string(),
        value,
        unit: unit.to_string(),
    }
}
