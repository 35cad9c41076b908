//! Spectral efficiency against energy per bit, the minimum `Eb/N0` and the
//! wideband slope for the unquantized, antipodal and optimal one-bit
//! channels.
//!
//! Sampling at the Nyquist rate turns `C(P)` nats per real sample into
//! `(2/ln 2)·C(P)` bits per second per hertz.

use alloc::vec::Vec;
use libm::log10;

use crate::capacity::{c_sym, gaussian_capacity, solve_capacity_avg, CapacityResult};
use crate::{Error, Nats, NoiseStd, PowerBudget, Result};

const LN_2: f64 = core::f64::consts::LN_2;
const PI: f64 = core::f64::consts::PI;

/// Largest solver gap accepted on the optimal curve.
pub const OPT_GAP_LIMIT: f64 = 1e-6;

/// Which capacity drives the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMode {
    Gaussian,
    Sym,
    Opt,
}

/// One point of an efficiency curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub eb_no_db: f64,
    pub efficiency_bps_hz: f64,
    pub power: f64,
}

/// A curve with the power below which the optimal-mode solver was not
/// trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    pub points: Vec<SpectralPoint>,
    pub truncated_below: Option<f64>,
}

/// `10 log10` of a ratio.
#[inline]
pub fn db(ratio: f64) -> f64 {
    10.0 * log10(ratio)
}

/// Map a capacity at power `P` to `(Eb/N0 [dB], C̄ [bit/s/Hz])`.
pub fn spectral_point(power: f64, capacity: Nats, sigma: NoiseStd) -> SpectralPoint {
    let ebno = LN_2 / (2.0 * sigma.variance()) * power / capacity;
    SpectralPoint { eb_no_db: db(ebno), efficiency_bps_hz: 2.0 / LN_2 * capacity, power }
}

/// Curve for a strictly increasing power grid. The optimal mode runs the
/// average-power solver at every point.
pub fn spectral_curve(p_grid: &[PowerBudget], sigma: NoiseStd, mode: SpectralMode) -> Result<SpectralCurve> {
    check_increasing(p_grid)?;
    match mode {
        SpectralMode::Gaussian | SpectralMode::Sym => {
            let points = p_grid
                .iter()
                .map(|&p| {
                    let c = if mode == SpectralMode::Gaussian { gaussian_capacity(p, sigma) } else { c_sym(p, sigma) };
                    spectral_point(p.get(), c, sigma)
                })
                .collect();
            Ok(SpectralCurve { points, truncated_below: None })
        }
        SpectralMode::Opt => {
            let results: Vec<CapacityResult> = p_grid.iter().map(|&p| solve_capacity_avg(p, sigma)).collect();
            opt_curve_from(p_grid, &results, sigma)
        }
    }
}

/// Assemble the optimal-mode curve from solver results, dropping every
/// power at or below the largest one whose gap exceeds [`OPT_GAP_LIMIT`].
pub fn opt_curve_from(p_grid: &[PowerBudget], results: &[CapacityResult], sigma: NoiseStd) -> Result<SpectralCurve> {
    check_increasing(p_grid)?;
    if results.len() != p_grid.len() {
        return Err(Error::LengthMismatch { expected: p_grid.len(), found: results.len() });
    }
    let cut = (0..p_grid.len()).rev().find(|&i| results[i].gap_estimate > OPT_GAP_LIMIT);
    let first = cut.map_or(0, |i| i + 1);
    let points = (first..p_grid.len())
        .map(|i| spectral_point(p_grid[i].get(), results[i].value, sigma))
        .collect();
    Ok(SpectralCurve { points, truncated_below: cut.map(|i| p_grid[i].get()) })
}

fn check_increasing(p_grid: &[PowerBudget]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::InvalidGrid("empty power grid"));
    }
    if p_grid.windows(2).any(|w| w[1].get() <= w[0].get()) {
        return Err(Error::InvalidGrid("power grid must be strictly increasing"));
    }
    Ok(())
}

/// Slope of capacity at zero power, `Ċ(0)`.
pub fn slope_at_zero(mode: SpectralMode, sigma: NoiseStd) -> f64 {
    match mode {
        SpectralMode::Gaussian | SpectralMode::Opt => 1.0 / (2.0 * sigma.variance()),
        SpectralMode::Sym => 1.0 / (PI * sigma.variance()),
    }
}

/// `C̈_sym(0) = (2/(3πσ⁴))(1/π - 1)`.
pub fn sym_second_derivative(sigma: NoiseStd) -> f64 {
    let s4 = sigma.variance() * sigma.variance();
    2.0 / (3.0 * PI * s4) * (1.0 / PI - 1.0)
}

/// Minimum energy per bit in dB, `(ln 2/(2σ²))/Ċ(0)`.
pub fn ebno_min(mode: SpectralMode, sigma: NoiseStd) -> f64 {
    db(LN_2 / (2.0 * sigma.variance()) / slope_at_zero(mode, sigma))
}

/// Wideband slope `4Ċ(0)²/(-C̈(0))` in bit/s/Hz per 3 dB.
pub fn wideband_slope(mode: SpectralMode) -> f64 {
    match mode {
        SpectralMode::Gaussian => 2.0,
        SpectralMode::Sym => 6.0 / (PI - 1.0),
        SpectralMode::Opt => 0.0,
    }
}

/// Finite-difference slope of efficiency against `Eb/N0` in 3 dB units
/// between two points.
pub fn secant_slope(a: &SpectralPoint, b: &SpectralPoint) -> f64 {
    (b.efficiency_bps_hz - a.efficiency_bps_hz) / (b.eb_no_db - a.eb_no_db) * db(2.0)
}
