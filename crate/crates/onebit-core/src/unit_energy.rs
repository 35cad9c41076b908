//! Capacity per unit energy with threshold quantizers: relative-entropy
//! ratios, lattice sweeps, the clipped-output bound `Ψ` and the
//! bounded-threshold supremum.

use alloc::vec::Vec;
use libm::{exp, fabs, log, log1p};

use crate::capacity::solve_capacity_avg;
use crate::channels::q_pair;
use crate::optim::golden_max;
use crate::quad::gauss_kronrod_breaks;
use crate::specfun::{kl_parts, log_q, mills_ratio, phi, q_func, LN_SQRT_2PI};
use crate::{Error, NoiseStd, PowerBudget, Result};

const LN_2: f64 = core::f64::consts::LN_2;

/// A probe input, its threshold and the relative entropy per unit energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlRatio {
    pub xi: f64,
    pub upsilon: f64,
    /// `D(P_{Y|X=ξ} ‖ P_{Y|X=0}) / ξ²`.
    pub value: f64,
}

/// Relative entropy between the threshold laws at `x` and `0`, in units
/// where σ = 1.
pub(crate) fn threshold_kl(x: f64, u: f64) -> f64 {
    let (p, pc) = q_pair(u - x);
    let (q, qc) = q_pair(u);
    kl_parts(p, pc, q, qc, log_q(u), log_q(-u))
}

fn check_probe(xi: f64, upsilon: f64) -> Result<()> {
    if xi == 0.0 {
        return Err(Error::ZeroInput);
    }
    if !xi.is_finite() {
        return Err(Error::Domain { what: "probe input", value: xi });
    }
    if !upsilon.is_finite() {
        return Err(Error::Domain { what: "threshold", value: upsilon });
    }
    Ok(())
}

/// Relative entropy per unit energy of the probe `ξ` under threshold `Υ`.
pub fn kl_ratio_threshold(xi: f64, upsilon: f64, sigma: NoiseStd) -> Result<KlRatio> {
    check_probe(xi, upsilon)?;
    let s = sigma.get();
    let value = threshold_kl(xi / s, upsilon / s) / (xi * xi);
    Ok(KlRatio { xi, upsilon, value })
}

// Larger value wins; ties go to the lexicographically smaller (ξ, Υ).
fn better(a: &KlRatio, b: &KlRatio) -> bool {
    a.value > b.value
        || (a.value == b.value && (a.xi < b.xi || (a.xi == b.xi && a.upsilon < b.upsilon)))
}

/// Best ratio on the lattice `{(ξ, Υ = ξ - μ)}`.
pub fn cue_sweep(sigma: NoiseStd, xi_grid: &[f64], mu_grid: &[f64]) -> Result<KlRatio> {
    if xi_grid.is_empty() || mu_grid.is_empty() {
        return Err(Error::InvalidGrid("cue sweep grids must be nonempty"));
    }
    let mut best: Option<KlRatio> = None;
    for &xi in xi_grid {
        for &mu in mu_grid {
            let r = kl_ratio_threshold(xi, xi - mu, sigma)?;
            if best.as_ref().map_or(true, |b| better(&r, b)) {
                best = Some(r);
            }
        }
    }
    best.ok_or(Error::InvalidGrid("empty sweep"))
}

/// `Ψ(ξ)`: relative entropy between the clipped outputs `Ỹ·1{Ỹ ≥ 0}`
/// under `X = ξ` and `X = 0`.
///
/// The density part on `[0, ξ + 12σ]` is integrated by adaptive
/// Gauss–Kronrod and its Gaussian tail added in closed form; the atom at
/// zero uses `Q` directly.
pub fn psi(xi: f64, sigma: NoiseStd) -> Result<f64> {
    check_probe(xi, 0.0)?;
    let x = xi / sigma.get();
    let top = x.max(0.0) + 12.0;
    let density = |y: f64| phi(y - x) * (y * x - 0.5 * x * x);
    let breaks = if x > 0.0 { [0.0, x, top] } else { [0.0, 0.0, top] };
    let body = gauss_kronrod_breaks(density, &breaks, 1e-17, 1e-14, 2000)?;
    // ∫_top^∞ φ(y-x)(yx - x²/2) dy
    let tail = 0.5 * x * x * q_func(top - x) + x * phi(top - x);
    // P(Ỹ < 0 | ξ) ln(P(Ỹ < 0 | ξ) / ½)
    let atom = q_func(x) * (log_q(x) + LN_2);
    Ok(body.value + tail + atom)
}

/// `ξ²/(2σ²) - Ψ(ξ)` from the closed form
/// `Q(x)(x²/2 - ln 2 - ln Q(x)) - xφ(x)`, `x = ξ/σ`; for `x ≥ 1` the
/// Gaussian factor is pulled out through the Mills ratio so the gap stays
/// resolvable where `Ψ` and `ξ²/2` agree to every bit.
pub fn psi_gap(xi: f64, sigma: NoiseStd) -> Result<f64> {
    check_probe(xi, 0.0)?;
    let x = xi / sigma.get();
    if x < 1.0 {
        return Ok(q_func(x) * (0.5 * x * x - LN_2 - log_q(x)) - x * phi(x));
    }
    let m = mills_ratio(x);
    // ln Q = -x²/2 - ln √(2π) + ln M
    let bracket = m * (x * x - LN_2 + LN_SQRT_2PI - log(m)) - x;
    Ok(phi(x) * bracket)
}

/// Supremum of the ratio over probes `ξ ≠ 0` and thresholds `0 ≤ Υ ≤ ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedSup {
    pub value: f64,
    pub xi: f64,
    pub upsilon: f64,
    /// `[ln(1/Q(ν/σ)) + ln 2]/ξ²` at `ξ = 100σ`.
    pub envelope_at_100: f64,
    /// Largest ratio over thresholds in `[0, ν]` at `ξ = 100σ`.
    pub objective_at_100: f64,
}

impl BoundedSup {
    /// The large-probe envelope dominates the objective.
    pub fn envelope_holds(&self) -> bool {
        self.objective_at_100 <= self.envelope_at_100
    }
}

/// Nested search: log-spaced probe magnitudes of both signs against a
/// threshold grid, then alternating golden-section refinement.
pub fn bounded_threshold_sup(nu: f64, sigma: NoiseStd) -> Result<BoundedSup> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain { what: "threshold bound", value: nu });
    }
    let s = sigma.get();
    let n = nu / s;
    let ratio = |x: f64, u: f64| threshold_kl(x, u) / (x * x);
    let n_mag = 160;
    let n_ups = 48;
    let (lo_exp, hi_exp) = (-3.0f64, 2.0f64);
    let mag = |i: usize| libm::pow(10.0, lo_exp + (hi_exp - lo_exp) * i as f64 / (n_mag - 1) as f64);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for sign in [1.0, -1.0] {
        for i in 0..n_mag {
            let x = sign * mag(i);
            for j in 0..=n_ups {
                let u = n * j as f64 / n_ups as f64;
                let v = ratio(x, u);
                if v > best.0 {
                    best = (v, x, u);
                }
            }
        }
    }
    // Refine in (log|ξ|, Υ), one cell around the grid optimum.
    let cell = (hi_exp - lo_exp) / (n_mag - 1) as f64;
    let (mut v, mut x, mut u) = best;
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    for _ in 0..20 {
        let lx = libm::log10(fabs(x));
        let rx = golden_max(|t| ratio(sign * libm::pow(10.0, t), u), (lx - cell).max(lo_exp - 1.0), lx + cell, 1e-12);
        if rx.value > v {
            x = sign * libm::pow(10.0, rx.arg);
            v = rx.value;
        }
        let ru = golden_max(|t| ratio(x, t), (u - n / n_ups as f64).max(0.0), (u + n / n_ups as f64).min(n), 1e-12);
        let before = v;
        if ru.value > v {
            u = ru.arg;
            v = ru.value;
        }
        if v - before <= 1e-15 * v {
            break;
        }
    }
    let far = 100.0;
    let mut obj_far = 0.0f64;
    for j in 0..=4 * n_ups {
        let t = n * j as f64 / (4 * n_ups) as f64;
        obj_far = obj_far.max(ratio(far, t));
    }
    let env = (-log_q(n) + LN_2) / (far * far);
    Ok(BoundedSup {
        value: v / (s * s),
        xi: x * s,
        upsilon: u * s,
        envelope_at_100: env / (s * s),
        objective_at_100: obj_far / (s * s),
    })
}

/// `[C(P) - P/(2σ²)]/P²` on a decreasing power grid, with the capacity from
/// the average-power solver.
pub fn second_order_diagnostic(p_grid: &[PowerBudget], sigma: NoiseStd) -> Result<Vec<(f64, f64)>> {
    check_decreasing(p_grid)?;
    Ok(p_grid
        .iter()
        .map(|&p| (p.get(), second_order_value(p.get(), solve_capacity_avg(p, sigma).value, sigma)))
        .collect())
}

/// Same as [`second_order_diagnostic`] for precomputed capacities.
pub fn second_order_from(p_and_c: &[(f64, f64)], sigma: NoiseStd) -> Vec<(f64, f64)> {
    p_and_c.iter().map(|&(p, c)| (p, second_order_value(p, c, sigma))).collect()
}

pub(crate) fn check_decreasing(p_grid: &[PowerBudget]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::InvalidGrid("empty power grid"));
    }
    if p_grid.windows(2).any(|w| w[1].get() >= w[0].get()) {
        return Err(Error::InvalidGrid("power grid must be strictly decreasing"));
    }
    Ok(())
}

fn second_order_value(p: f64, c: f64, sigma: NoiseStd) -> f64 {
    (c - p / (2.0 * sigma.variance())) / (p * p)
}

/// The unquantized counterpart `[½ ln(1 + P/σ²) - P/(2σ²)]/P²`.
pub fn gaussian_second_order(p: PowerBudget, sigma: NoiseStd) -> f64 {
    let s = p.get() / sigma.variance();
    // ½(ln(1+s) - s)/P², series for small s
    let deficit = if s < 1e-3 {
        let mut sum = 0.0;
        let mut pow = s * s;
        let mut k = 2.0;
        while k < 20.0 {
            let sign = if (k as i32) % 2 == 0 { -1.0 } else { 1.0 };
            sum += sign * pow / k;
            pow *= s;
            k += 1.0;
        }
        0.5 * sum
    } else {
        0.5 * (log1p(s) - s)
    };
    deficit / (p.get() * p.get())
}

/// Lower bound on `Q(u)` for `u > 0` used in the positivity argument:
/// `(3/4) e^{-u²/2} / (√(2π) u)`, valid for `u ≥ 2`.
pub fn q_lower_bound(u: f64) -> f64 {
    0.75 * phi(u) / u
}

/// `g(u) = 2u Q(u)(1 - Q(u)) - φ(u)(1 - 2Q(u))`, whose sign governs the
/// peak-power slope.
pub fn g_check(u: f64) -> f64 {
    let (q, qc) = q_pair(u);
    2.0 * u * q * qc - phi(u) * (qc - q)
}

/// `f(Υ) = e^{-Υ²/σ²} / (Q(Υ/σ)(1 - Q(Υ/σ)))`.
pub fn f_check(upsilon: f64, sigma: NoiseStd) -> f64 {
    let u = upsilon / sigma.get();
    let (q, qc) = q_pair(u);
    exp(-u * u) / (q * qc)
}
