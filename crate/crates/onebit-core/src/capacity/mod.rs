//! Mutual information with binary output, closed-form capacities and the
//! average-power capacity solver.

use alloc::vec::Vec;
use libm::{exp, log, log1p, sqrt};

use crate::channels::{q_pair, BinaryLaw, DiscreteInput, Quantizer};
use crate::optim::grid_golden_max;
use crate::specfun::{binary_entropy, kl_parts, q_func};
use crate::{Error, Nats, NoiseStd, PowerBudget, Result};

mod solver;

pub use solver::{solve_capacity_avg, solve_capacity_avg_with, MultistartPlan, StartOutcome, N_STARTS};

const LN_2: f64 = core::f64::consts::LN_2;

/// Optimized capacity with the achieving input, quantizer and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub value: Nats,
    pub input: DiscreteInput,
    pub quantizer: Quantizer,
    pub converged: bool,
    pub iterations: usize,
    /// Best minus second-best multistart value; a diagnostic, not a bound.
    pub gap_estimate: Nats,
}

/// `I(X;Y) = Σ pℓ D(wℓ ‖ w̄)` for a binary output with `P(Y=1|X=ξℓ) = wℓ`.
pub fn mutual_info(input: &DiscreteInput, law: &BinaryLaw) -> Result<Nats> {
    if input.len() != law.len() {
        return Err(Error::LengthMismatch { expected: input.len(), found: law.len() });
    }
    let pairs: Vec<(f64, f64)> = law.w().iter().map(|&w| (w, 1.0 - w)).collect();
    Ok(mutual_info_pairs(input.probs(), &pairs))
}

/// Mutual information from probabilities and `(w, 1 - w)` pairs.
pub(crate) fn mutual_info_pairs(probs: &[f64], w: &[(f64, f64)]) -> f64 {
    let mut bar = 0.0;
    let mut bar_c = 0.0;
    for (p, (a, ac)) in probs.iter().zip(w) {
        bar += p * a;
        bar_c += p * ac;
    }
    let ln_bar = if bar > 1e-290 { log(bar) } else { ln_mixture(probs, w.iter().map(|x| x.0)) };
    let ln_bar_c = if bar_c > 1e-290 { log(bar_c) } else { ln_mixture(probs, w.iter().map(|x| x.1)) };
    let mut info = 0.0;
    for (p, (a, ac)) in probs.iter().zip(w) {
        if *p > 0.0 {
            info += p * kl_parts(*a, *ac, bar, bar_c, ln_bar, ln_bar_c);
        }
    }
    info.clamp(0.0, LN_2)
}

// ln Σ pᵢaᵢ without underflow of the products.
fn ln_mixture(probs: &[f64], a: impl Iterator<Item = f64>) -> f64 {
    let logs: Vec<f64> = probs
        .iter()
        .zip(a)
        .filter(|(p, x)| **p > 0.0 && *x > 0.0)
        .map(|(p, x)| log(*p) + log(x))
        .collect();
    let top = logs.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + log(logs.iter().map(|v| exp(v - top)).sum::<f64>())
}

/// Capacity of antipodal signalling with a zero threshold,
/// `ln 2 - H_b(Q(√P/σ))`.
pub fn c_sym(p: PowerBudget, sigma: NoiseStd) -> Nats {
    let (w, wc) = q_pair(sqrt(p.get()) / sigma.get());
    kl_parts(w, wc, 0.5, 0.5, -LN_2, -LN_2)
}

/// Capacity of the binary asymmetric channel with crossovers
/// `w01 = P(Y=1|X=0)` and `w10 = P(Y=0|X=1)`.
///
/// Outputs are relabelled when `w01 + w10 > 1`; a crossover sum of exactly
/// one is a useless channel and yields 0.
pub fn bac_capacity(w01: f64, w10: f64) -> Result<Nats> {
    for v in [w01, w10] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain { what: "crossover probability", value: v });
        }
    }
    let s = w01 + w10;
    if s == 1.0 {
        return Ok(0.0);
    }
    let (a, b) = if s > 1.0 { (1.0 - w01, 1.0 - w10) } else { (w01, w10) };
    Ok(bac_formula(a, b, 1.0 - a - b))
}

// Requires gap = 1 - a - b > 0, passed separately to keep its accuracy.
fn bac_formula(a: f64, b: f64, gap: f64) -> f64 {
    let theta = (binary_entropy(a) - binary_entropy(b)) / gap;
    let soft = if theta > 0.0 { log1p(exp(-theta)) } else { -theta + log1p(exp(theta)) };
    // Dobrushin: C ≤ (1 - a - b) ln 2, which also caps rounding noise when
    // the gap is tiny
    (soft + theta * b - binary_entropy(b)).clamp(0.0, gap * LN_2)
}

/// Peak-power objective: capacity of the binary channel with inputs
/// `±√P` and threshold `Υ`.
pub fn c_peak_objective(p: PowerBudget, upsilon: f64, sigma: NoiseStd) -> Nats {
    let a = sqrt(p.get()) / sigma.get();
    let u = upsilon / sigma.get();
    // P(Y=1 | -√P) and P(Y=0 | +√P)
    let (w01, _) = q_pair(u + a);
    let (w10, _) = q_pair(a - u);
    // 1 - w01 - w10 = P(-a-u ≤ Z ≤ a-u), from whichever tails are small
    let gap = if u >= a {
        q_func(u - a) - q_func(u + a)
    } else if u <= -a {
        q_func(-a - u) - q_func(a - u)
    } else {
        1.0 - q_func(a - u) - q_func(a + u)
    };
    if !(gap > 0.0) {
        return 0.0;
    }
    bac_formula(w01, w10, gap)
}

/// Peak-power capacity and the maximizing threshold `Υ ≥ 0`.
pub fn c_peak(p: PowerBudget, sigma: NoiseStd) -> (Nats, f64) {
    let top = sqrt(p.get()) + 8.0 * sigma.get();
    let best = grid_golden_max(|u| c_peak_objective(p, u, sigma), 0.0, top, 800, 1e-10);
    (best.value, best.arg)
}

/// Which capacity a curve evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMode {
    Avg,
    Peak,
    Sym,
}

/// Capacity at each power of a strictly increasing grid.
pub fn capacity_vs_power_curve(p_grid: &[PowerBudget], sigma: NoiseStd, mode: CurveMode) -> Result<Vec<(f64, Nats)>> {
    if p_grid.is_empty() {
        return Err(Error::InvalidGrid("empty power grid"));
    }
    if p_grid.windows(2).any(|w| w[1].get() <= w[0].get()) {
        return Err(Error::InvalidGrid("power grid must be strictly increasing"));
    }
    Ok(p_grid
        .iter()
        .map(|&p| {
            let c = match mode {
                CurveMode::Avg => solve_capacity_avg(p, sigma).value,
                CurveMode::Peak => c_peak(p, sigma).0,
                CurveMode::Sym => c_sym(p, sigma),
            };
            (p.get(), c)
        })
        .collect())
}

/// `½ ln(1 + P/σ²)`, the unquantized capacity.
pub fn gaussian_capacity(p: PowerBudget, sigma: NoiseStd) -> Nats {
    0.5 * log1p(p.get() / sigma.variance())
}
