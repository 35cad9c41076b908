//! Reference computations for testing `onebit-core`.
//!
//! Every routine here is built from formulas or search strategies that the
//! core crate does not use: double-double series for the Gaussian tail,
//! polar integration for the Marcum function, exhaustive lattices for the
//! capacity, a direct product formula for PPM and Monte Carlo estimates of
//! relative entropy. Speed is not a goal.

pub mod capacity;
pub mod dd;
pub mod fading;
pub mod gauss;
pub mod integrate;
pub mod marcum;
pub mod ppm;
pub mod unit;

/// Knobs shared by the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Relative accuracy the oracle aims for; at least ten times tighter
    /// than the tolerance it is compared with.
    pub precision_target: f64,
    /// Points per axis of exhaustive lattices.
    pub grid_resolution: usize,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { precision_target: 1e-13, grid_resolution: 12, mc_samples: 1_000_000, seed: 20_240_601 }
    }
}

/// Frozen values written by the `derive-values` binary.
pub const DERIVED_VALUES: &str = include_str!("../derived_values.json");

/// Look up a frozen value by id.
pub fn derived(id: &str) -> f64 {
    let doc: serde_json::Value = serde_json::from_str(DERIVED_VALUES).expect("derived_values.json parses");
    doc["values"][id]["value"]
        .as_f64()
        .unwrap_or_else(|| panic!("no derived value named {id}"))
}
