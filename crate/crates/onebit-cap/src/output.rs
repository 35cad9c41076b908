//! Output files: JSON with sorted keys and 17-significant-digit numbers,
//! CSV with a header row, and a manifest next to every file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{SecondsFormat, Utc};
use serde_json::{Map, Number, Value};

/// `x` with 17 significant digits, enough to round-trip any double, and a
/// signed exponent (`2.5000000000000000e-1`, `1.0000000000000000e+0`).
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
        _ => s,
    }
}

/// JSON number printed by [`fmt_f64`]; `null` when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_f64(x)).expect("formatted double is a JSON number"))
    } else {
        Value::Null
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Object builder; keys serialize in sorted order.
#[derive(Debug, Default, Clone)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn f(mut self, key: &str, x: f64) -> Self {
        self.0.insert(key.into(), num(x));
        self
    }

    pub fn v(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.into(), v.into());
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

/// Parameters and provenance of one run.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub threads: usize,
}

impl RunManifest {
    fn to_json(&self, output: &Path) -> Value {
        Obj::new()
            .v("subcommand", self.subcommand)
            .v("parameters", self.parameters.clone())
            .v("tool_version", env!("CARGO_PKG_VERSION"))
            .v("seed", self.seed.map_or(Value::Null, |s| Value::from(s)))
            .v("threads", self.threads)
            .v("timestamp", Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
            .v("output", output.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
            .build()
    }
}

/// Path of the manifest that accompanies `output`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn write_text(path: &Path, text: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)
}

pub fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::other)? + "\n";
    write_text(path, &text)
}

pub fn write_manifest(output: &Path, manifest: &RunManifest) -> io::Result<()> {
    write_json(&manifest_path(output), &manifest.to_json(output))
}

/// CSV with `header` and stringified rows.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}
