//! Report assembly and byte-stable JSON output.

use std::io;

use awcore::C64;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

/// Pretty JSON with every float written at 17 significant digits.
struct ReportFormatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.0.$name(w)
        })*
    };
}

impl Formatter for ReportFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    delegate!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
}

/// Serializes a report value; non-finite floats become `null`.
pub fn to_bytes(v: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ReportFormatter(PrettyFormatter::new()));
    serde::Serialize::serialize(v, &mut ser).expect("writing JSON to memory cannot fail");
    out.push(b'\n');
    out
}

/// Float formatting shared by CSV tables.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn cj(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Pass/fail records and informational entries of one campaign.
#[derive(Debug, Default)]
pub struct Campaign {
    pub checks: Vec<Value>,
    pub info: Vec<Value>,
}

impl Campaign {
    fn record(&mut self, name: &str, inputs: Value, value: f64, tol: f64, relation: &str, pass: bool) {
        self.checks.push(json!({
            "name": name,
            "inputs": inputs,
            "value": value,
            "tolerance": tol,
            "relation": relation,
            "pass": pass,
        }));
    }

    /// Passes when `value < tol`; NaN fails.
    pub fn below(&mut self, name: &str, inputs: Value, value: f64, tol: f64) {
        self.record(name, inputs, value, tol, "below", value < tol);
    }

    /// Passes when `value > floor`; used by negative controls.
    pub fn above(&mut self, name: &str, inputs: Value, value: f64, floor: f64) {
        self.record(name, inputs, value, floor, "above", value > floor);
    }

    /// Records a failure that prevented the check from running.
    pub fn error(&mut self, name: &str, inputs: Value, err: &dyn std::fmt::Display) {
        self.checks.push(json!({
            "name": name,
            "inputs": inputs,
            "error": err.to_string(),
            "pass": false,
        }));
    }

    pub fn info(&mut self, name: &str, inputs: Value, value: Value) {
        self.info.push(json!({ "name": name, "inputs": inputs, "value": value }));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c["pass"] == json!(true))
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c["pass"] == json!(true)).count()
    }
}
