//! Check records, reports and their serialization.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

/// One compared quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_err: f64,
    /// Relative error; equals `abs_err` when `expected` is zero.
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let abs_err = (actual - expected).abs();
        let rel_err = if expected == 0.0 { abs_err } else { abs_err / expected.abs() };
        // NaN compares false, so non-finite results fail
        let pass = rel_err <= tol;
        Self {
            name: name.into(),
            expected,
            actual,
            abs_err,
            rel_err,
            tol,
            pass,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), self.name.clone().into());
        m.insert("expected".into(), number(self.expected));
        m.insert("actual".into(), number(self.actual));
        m.insert("abs_err".into(), number(self.abs_err));
        m.insert("rel_err".into(), number(self.rel_err));
        m.insert("tol".into(), number(self.tol));
        m.insert("pass".into(), self.pass.into());
        Value::Object(m)
    }
}

/// Outcome of one command. Parameters and derived values are emitted as
/// top-level keys next to `command`, `checks`, `pass` and `runtime_ms`.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, Value)>,
    pub values: Vec<(String, f64)>,
    pub checks: Vec<CheckRecord>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn param_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.params.push((key.into(), number(value)));
        self
    }

    pub fn value(&mut self, key: &str, value: f64) {
        self.values.push((key.into(), value));
    }

    pub fn check(&mut self, name: impl Into<String>, expected: f64, actual: f64, tol: f64) {
        self.checks.push(CheckRecord::new(name, expected, actual, tol));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn n_failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        for (k, v) in &self.params {
            m.insert(k.clone(), v.clone());
        }
        for (k, v) in &self.values {
            m.insert(k.clone(), number(*v));
        }
        m.insert("checks".into(), Value::Array(self.checks.iter().map(CheckRecord::to_json).collect()));
        m.insert("pass".into(), self.pass().into());
        m.insert("runtime_ms".into(), self.runtime_ms.into());
        Value::Object(m)
    }

    /// Pretty JSON with every float written to 17 significant digits.
    pub fn write_json<W: Write>(&self, out: W) -> io::Result<()> {
        write_json(&self.to_json(), out)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({}/{} checks passed, {} ms)",
            self.command,
            if self.pass() { "PASS" } else { "FAIL" },
            self.checks.len() - self.n_failed(),
            self.checks.len(),
            self.runtime_ms
        )
    }
}

/// JSON number, or `null` when not finite.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Digits17<'a>(serde_json::ser::PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

fn write_json<W: Write>(value: &Value, mut out: W) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(io::Error::other)?;
    out.write_all(b"\n")
}
