//! Machine-readable check reports.
//!
//! Floating-point values are written with 17 significant digits so that
//! reports round-trip exactly and identical runs produce identical bytes.

use serde::Serialize;
use serde_json::{Map, Value};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A JSON number carrying exactly the digits of [`fmt_f64`]; non-finite
/// values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str::<serde_json::Number>(&fmt_f64(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn num_array(xs: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}

/// Outcome of one numerical check: the worst defect seen, the tolerance it
/// was held to, and the inputs that produced the worst case.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Map<String, Value>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            defect,
            tolerance,
            pass: defect <= tolerance,
            witness: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.witness.insert(key.to_string(), value);
        self
    }

    /// Forces failure regardless of the defect (e.g. a rank mismatch).
    pub fn fail_if(mut self, failed: bool) -> Self {
        if failed {
            self.pass = false;
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("check".into(), Value::String(self.check.clone()));
        m.insert("defect".into(), num(self.defect));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("pass".into(), Value::Bool(self.pass));
        m.insert("witness".into(), Value::Object(self.witness.clone()));
        Value::Object(m)
    }
}

impl Serialize for CheckReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Tracks the worst defect over a sample loop together with its witness.
#[derive(Debug, Clone)]
pub struct Worst {
    pub defect: f64,
    pub witness: Map<String, Value>,
}

impl Default for Worst {
    fn default() -> Self {
        Self {
            defect: 0.0,
            witness: Map::new(),
        }
    }
}

impl Worst {
    /// Records `defect` if it is the worst so far; `witness` is only built then.
    pub fn offer(&mut self, defect: f64, witness: impl FnOnce() -> Map<String, Value>) {
        let first = self.witness.is_empty();
        if first || defect > self.defect || (defect.is_nan() && !self.defect.is_nan()) {
            self.defect = defect;
            self.witness = witness();
        }
    }

    pub fn into_report(self, check: &str, tolerance: f64) -> CheckReport {
        let mut r = CheckReport::new(check, self.defect, tolerance);
        if self.defect.is_nan() {
            r.pass = false;
        }
        r.witness = self.witness;
        r
    }
}
