#![allow(dead_code)]

use std::sync::OnceLock;

use onebit_core::{NoiseStd, PowerBudget};

fn doc() -> &'static serde_json::Value {
    static DOC: OnceLock<serde_json::Value> = OnceLock::new();
    DOC.get_or_init(|| serde_json::from_str(include_str!("../../../onebit-oracles/derived_values.json")).expect("frozen values parse"))
}

/// Frozen oracle value by id.
pub fn derived(id: &str) -> f64 {
    doc()["values"][id]["value"].as_f64().unwrap_or_else(|| panic!("missing frozen value {id}"))
}

pub fn pb(p: f64) -> PowerBudget {
    PowerBudget::new(p).unwrap()
}

pub fn sigma(s: f64) -> NoiseStd {
    NoiseStd::new(s).unwrap()
}

pub const UNIT: NoiseStd = NoiseStd::UNIT;

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}
