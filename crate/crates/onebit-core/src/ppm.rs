//! Pulse-position modulation with a one-bit threshold detector.
//!
//! A message picks one of `M` slots and sends amplitude `ξ` there, zero
//! elsewhere. The decoder accepts when exactly one slot fires and that slot
//! carries the message. The simulator draws, per trial, the signal-slot bit
//! and the number of false alarms among the `M - 1` empty slots, which is
//! statistically identical to simulating every slot.

use libm::{exp, expm1, log1p, sqrt};

use crate::channels::threshold_law;
use crate::rng::{binomial, Philox4x64, Substream};
use crate::specfun::q_inv;
use crate::{Error, NoiseStd, Result};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
const MAX_TRIALS: u64 = 1 << 62;
const STREAM_TAG: u64 = 0x9e3d_0001;

/// One PPM operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpmConfig {
    pub m: u64,
    /// Rate per unit energy in nats.
    pub rate_per_energy: f64,
    /// Target miss probability of the signal slot.
    pub epsilon: f64,
    pub sigma: NoiseStd,
    pub trials: u64,
    pub seed: u64,
}

impl PpmConfig {
    pub fn new(m: u64, rate_per_energy: f64, epsilon: f64, sigma: NoiseStd, trials: u64, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain { what: "message count", value: m as f64 });
        }
        if !(rate_per_energy > 0.0) || !rate_per_energy.is_finite() {
            return Err(Error::Domain { what: "rate per energy", value: rate_per_energy });
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain { what: "miss probability", value: epsilon });
        }
        if trials == 0 || trials > MAX_TRIALS {
            return Err(Error::TrialCount(trials));
        }
        Ok(Self { m, rate_per_energy, epsilon, sigma, trials, seed })
    }
}

/// Analytic and simulated error figures for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpmReport {
    pub xi: f64,
    pub upsilon: f64,
    /// Energy per codeword, `ξ² = ln M / rate`.
    pub energy: f64,
    pub false_alarm_prob: f64,
    pub union_bound: f64,
    pub exact_error: f64,
    pub mc_error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials_run: u64,
    pub errors: u64,
}

/// Pulse amplitude `ξ = √(ln M / rate)` and threshold `Υ = ξ - σQ⁻¹(ε)`,
/// which makes the miss probability exactly `ε`.
pub fn ppm_threshold(cfg: &PpmConfig) -> (f64, f64) {
    let xi = sqrt(libm::log(cfg.m as f64) / cfg.rate_per_energy);
    // epsilon is validated to lie in (0, 1)
    let shift = q_inv(cfg.epsilon).unwrap_or(0.0);
    (xi, xi - cfg.sigma.get() * shift)
}

/// Probability that an empty slot fires.
pub fn false_alarm_prob(cfg: &PpmConfig) -> f64 {
    let (_, u) = ppm_threshold(cfg);
    threshold_law(0.0, u, cfg.sigma)
}

/// `min(1, (M - 1) q + ε)`.
pub fn ppm_union_bound(cfg: &PpmConfig) -> f64 {
    ((cfg.m - 1) as f64 * false_alarm_prob(cfg) + cfg.epsilon).min(1.0)
}

/// `ε + (1 - ε)(1 - (1 - q)^{M-1})`.
pub fn ppm_exact_error(cfg: &PpmConfig) -> f64 {
    let q = false_alarm_prob(cfg);
    let any_alarm = -expm1((cfg.m - 1) as f64 * log1p(-q));
    cfg.epsilon + (1.0 - cfg.epsilon) * any_alarm
}

/// Non-miss part of the exact error, `(1 - ε)(1 - (1 - q)^{M-1})`.
pub fn ppm_alarm_component(cfg: &PpmConfig) -> f64 {
    ppm_exact_error(cfg) - cfg.epsilon
}

/// Integer tallies over a block of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialCounts {
    pub trials: u64,
    pub errors: u64,
    pub misses: u64,
    pub alarmed: u64,
}

impl core::ops::Add for TrialCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            errors: self.errors + o.errors,
            misses: self.misses + o.misses,
            alarmed: self.alarmed + o.alarmed,
        }
    }
}

/// Simulate trials `start..end` with false-alarm probability `q`.
///
/// Trial `i` draws from substream `i` of the key `(seed, tag)`, so splitting
/// a range never changes the outcome.
pub fn simulate_range_with(cfg: &PpmConfig, q: f64, start: u64, end: u64) -> TrialCounts {
    let gen = Philox4x64::new([cfg.seed, STREAM_TAG]);
    let mut c = TrialCounts::default();
    for i in start..end {
        let mut rng = Substream::new(gen, i);
        let missed = rng.uniform() < cfg.epsilon;
        let alarms = binomial(cfg.m - 1, q, &mut rng);
        c.trials += 1;
        c.misses += missed as u64;
        c.alarmed += (alarms > 0) as u64;
        c.errors += (missed || alarms > 0) as u64;
    }
    c
}

/// [`simulate_range_with`] at the configuration's own false-alarm probability.
pub fn simulate_range(cfg: &PpmConfig, start: u64, end: u64) -> TrialCounts {
    simulate_range_with(cfg, false_alarm_prob(cfg), start, end)
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let ph = k as f64 / nf;
    let z2 = z * z;
    let den = 1.0 + z2 / nf;
    let center = (ph + z2 / (2.0 * nf)) / den;
    let half = z * sqrt(ph * (1.0 - ph) / nf + z2 / (4.0 * nf * nf)) / den;
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Assemble the report from tallies.
pub fn report_from_counts(cfg: &PpmConfig, counts: TrialCounts) -> PpmReport {
    let (xi, upsilon) = ppm_threshold(cfg);
    let rate = counts.errors as f64 / counts.trials.max(1) as f64;
    let (lo, hi) = wilson_interval(counts.errors, counts.trials, Z95);
    PpmReport {
        xi,
        upsilon,
        energy: xi * xi,
        false_alarm_prob: false_alarm_prob(cfg),
        union_bound: ppm_union_bound(cfg),
        exact_error: ppm_exact_error(cfg),
        mc_error_rate: rate,
        ci_low: lo.min(rate),
        ci_high: hi.max(rate),
        trials_run: counts.trials,
        errors: counts.errors,
    }
}

/// Sequential Monte Carlo run of all configured trials.
pub fn ppm_simulate(cfg: &PpmConfig) -> Result<PpmReport> {
    if cfg.trials == 0 || cfg.trials > MAX_TRIALS {
        return Err(Error::TrialCount(cfg.trials));
    }
    Ok(report_from_counts(cfg, simulate_range(cfg, 0, cfg.trials)))
}

/// Exact error with a forced false-alarm probability.
pub fn exact_error_with(epsilon: f64, m: u64, q: f64) -> f64 {
    epsilon + (1.0 - epsilon) * -expm1((m - 1) as f64 * log1p(-q))
}

/// Probability that none of `n` empty slots fire.
pub fn no_alarm_prob(n: u64, q: f64) -> f64 {
    exp(n as f64 * log1p(-q))
}
