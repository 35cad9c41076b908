//! Average-power capacity solver over three-point inputs and a threshold.
//!
//! Work is done in units of the noise standard deviation with the
//! signal-to-noise ratio `s = P/σ²`, so results are exactly invariant under
//! `(P, σ) → (c²P, cσ)` for power-of-two `c`.
//!
//! The input lives on the manifold `{Σp = 1, Σpξ = 0, Σpξ² = s}`: the
//! probabilities are a softmax of `(0, u₁, u₂)` and the points are
//! `√s (cos φ e₁ + sin φ e₂)` for a `p`-weighted orthonormal basis of the
//! zero-mean plane. Each multistart alternates a BFGS pass over
//! `(u₁, u₂, φ, Υ)` with a global scan and golden-section refinement of the
//! threshold alone.

use alloc::vec::Vec;
use libm::{atan2, cos, exp, fabs, log, sin, sqrt};

use super::{mutual_info_pairs, CapacityResult};
use crate::channels::{q_pair, DiscreteInput, Quantizer};
use crate::optim::{bfgs_max, grid_golden_max};
use crate::rng::{Philox4x64, Substream};
use crate::{NoiseStd, PowerBudget};

/// Number of multistarts.
pub const N_STARTS: usize = 32;
const N_ON_OFF_STARTS: usize = 8;
const MAX_ROUNDS: usize = 200;
const ROUND_TOL: f64 = 1e-10;
const TIE_TOL: f64 = 1e-12;
const START_KEY: [u64; 2] = [0x0b17_ca9a_c17e_5eed, 0x3];

/// Point-magnitude cap in units of σ.
fn point_cap(s: f64) -> f64 {
    40.0 * sqrt(s).max(1.0)
}

#[derive(Debug, Clone, Copy)]
struct Config {
    points: [f64; 3],
    probs: [f64; 3],
}

fn dot(p: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    p[0] * a[0] * b[0] + p[1] * a[1] * b[1] + p[2] * a[2] * b[2]
}

// p-weighted orthonormal basis of the zero-mean plane.
fn basis(p: &[f64; 3]) -> Option<([f64; 3], [f64; 3])> {
    let mut e1 = [1.0 - p[0], -p[0], -p[0]];
    let n1 = sqrt(dot(p, &e1, &e1));
    if !(n1 > 0.0) {
        return None;
    }
    e1.iter_mut().for_each(|v| *v /= n1);
    let mut e2 = [-p[1], 1.0 - p[1], -p[1]];
    let c = dot(p, &e2, &e1);
    for i in 0..3 {
        e2[i] -= c * e1[i];
    }
    let n2 = sqrt(dot(p, &e2, &e2));
    if !(n2 > 0.0) {
        return None;
    }
    e2.iter_mut().for_each(|v| *v /= n2);
    Some((e1, e2))
}

fn softmax(u1: f64, u2: f64) -> [f64; 3] {
    let m = 0.0f64.max(u1).max(u2);
    let (a, b, c) = (exp(-m), exp(u1 - m), exp(u2 - m));
    let t = a + b + c;
    [a / t, b / t, c / t]
}

fn decode(theta: &[f64], s: f64) -> Option<Config> {
    let probs = softmax(theta[0], theta[1]);
    if probs.iter().any(|&p| !(p > 1e-280)) {
        return None;
    }
    let (e1, e2) = basis(&probs)?;
    let r = sqrt(s);
    let (c, sn) = (cos(theta[2]), sin(theta[2]));
    let points = [
        r * (c * e1[0] + sn * e2[0]),
        r * (c * e1[1] + sn * e2[1]),
        r * (c * e1[2] + sn * e2[2]),
    ];
    let cap = point_cap(s);
    if points.iter().any(|x| !(fabs(*x) <= cap)) {
        return None;
    }
    Some(Config { points, probs })
}

fn encode(cfg: &Config, upsilon: f64) -> Option<[f64; 4]> {
    let p = cfg.probs;
    let (e1, e2) = basis(&p)?;
    let a = dot(&p, &cfg.points, &e1);
    let b = dot(&p, &cfg.points, &e2);
    Some([log(p[1] / p[0]), log(p[2] / p[0]), atan2(b, a), upsilon])
}

fn info(cfg: &Config, upsilon: f64) -> f64 {
    let w: [(f64, f64); 3] = core::array::from_fn(|i| q_pair(upsilon - cfg.points[i]));
    mutual_info_pairs(&cfg.probs, &w)
}

fn objective(theta: &[f64], s: f64) -> f64 {
    match decode(theta, s) {
        Some(cfg) => info(&cfg, theta[3]),
        None => f64::NEG_INFINITY,
    }
}

// Global scan of the threshold for a fixed input.
fn best_threshold(cfg: &Config) -> (f64, f64) {
    let reach = cfg.points.iter().fold(0.0f64, |m, x| m.max(fabs(*x))) + 6.0;
    let best = grid_golden_max(|u| info(cfg, u), -reach, reach, 240, 1e-12);
    (best.arg, best.value)
}

/// Result of refining one multistart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartOutcome {
    pub value: f64,
    /// `(u₁, u₂, φ, Υ)` in normalized units.
    pub theta: [f64; 4],
    pub rounds: usize,
    pub converged: bool,
}

/// The deterministic starting points for one signal-to-noise ratio.
#[derive(Debug, Clone)]
pub struct MultistartPlan {
    snr: f64,
    starts: Vec<[f64; 4]>,
}

impl MultistartPlan {
    /// Build the plan for `P/σ²`: the antipodal input, the best on-off
    /// inputs from a scan of on-amplitudes, and seeded random inputs.
    pub fn new(p: PowerBudget, sigma: NoiseStd) -> Self {
        let s = p.get() / sigma.variance();
        let mut starts: Vec<[f64; 4]> = Vec::with_capacity(N_STARTS);
        let r = sqrt(s);
        let sym = Config { points: [-r, r, r], probs: [0.5, 0.25, 0.25] };
        if let Some(t) = encode(&sym, 0.0) {
            starts.push(t);
        }
        for t in on_off_starts(s) {
            starts.push(t);
        }
        let gen = Philox4x64::new(START_KEY);
        let mut idx = 0u64;
        while starts.len() < N_STARTS {
            let mut rng = Substream::new(gen, idx);
            idx += 1;
            let u1 = -7.0 + 9.0 * rng.uniform();
            let u2 = -7.0 + 9.0 * rng.uniform();
            let phi = 2.0 * core::f64::consts::PI * rng.uniform();
            let theta = [u1, u2, phi, 0.0];
            if let Some(cfg) = decode(&theta, s) {
                let (u, _) = best_threshold(&cfg);
                starts.push([u1, u2, phi, u]);
            }
            if idx > 10_000 {
                break;
            }
        }
        Self { snr: s, starts }
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Refine start `i`; independent of every other start.
    pub fn refine(&self, i: usize) -> StartOutcome {
        refine(self.starts[i], self.snr)
    }

    /// Deterministic reduction of refined starts, in plan order.
    pub fn reduce(&self, outcomes: &[StartOutcome], sigma: NoiseStd) -> CapacityResult {
        reduce(outcomes, self.snr, sigma)
    }
}

fn on_off_starts(s: f64) -> Vec<[f64; 4]> {
    let r = sqrt(s);
    let hi = 0.9 * point_cap(s);
    let n = 48;
    let mut scored: Vec<(f64, [f64; 4])> = Vec::new();
    for i in 0..n {
        let b = r * exp(log(hi / r) * (i as f64 + 0.5) / n as f64);
        let a = s / b;
        let q = a / (a + b);
        let cfg = Config { points: [-a, -a, b], probs: [0.5 * (1.0 - q), 0.5 * (1.0 - q), q] };
        let (u, v) = best_threshold(&cfg);
        if let Some(t) = encode(&cfg, u) {
            scored.push((v, t));
        }
    }
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    scored.into_iter().take(N_ON_OFF_STARTS).map(|(_, t)| t).collect()
}

fn refine(start: [f64; 4], s: f64) -> StartOutcome {
    let mut theta = start;
    let mut value = objective(&theta, s);
    let mut converged = false;
    let mut rounds = 0;
    while rounds < MAX_ROUNDS {
        rounds += 1;
        let before = value;
        let r = bfgs_max(|t| objective(t, s), &theta, 1e-14, 400);
        if r.value > value {
            theta.copy_from_slice(&r.x);
            value = r.value;
        }
        if let Some(cfg) = decode(&theta, s) {
            let (u, v) = best_threshold(&cfg);
            if v > value {
                theta[3] = u;
                value = v;
            }
        }
        if value - before <= ROUND_TOL * value.max(1e-300) {
            converged = true;
            break;
        }
    }
    StartOutcome { value, theta, rounds, converged }
}

fn reduce(outcomes: &[StartOutcome], s: f64, sigma: NoiseStd) -> CapacityResult {
    let mut order: Vec<usize> = (0..outcomes.len()).filter(|&i| outcomes[i].value.is_finite()).collect();
    order.sort_by(|&i, &j| outcomes[j].value.total_cmp(&outcomes[i].value).then(i.cmp(&j)));
    if order.is_empty() {
        let r = sqrt(s) * sigma.get();
        return CapacityResult {
            value: info(&Config { points: [-sqrt(s), sqrt(s), sqrt(s)], probs: [0.5, 0.25, 0.25] }, 0.0),
            input: DiscreteInput::antipodal(r),
            quantizer: Quantizer::Threshold { upsilon: 0.0 },
            converged: false,
            iterations: 0,
            gap_estimate: f64::INFINITY,
        };
    }
    let top = outcomes[order[0]].value;
    let gap = order.get(1).map_or(0.0, |&j| top - outcomes[j].value);
    // Among near-ties, the smallest nonnegative threshold wins.
    let pick = order
        .iter()
        .copied()
        .filter(|&i| top - outcomes[i].value <= TIE_TOL)
        .min_by(|&i, &j| fabs(outcomes[i].theta[3]).total_cmp(&fabs(outcomes[j].theta[3])).then(i.cmp(&j)))
        .unwrap_or(order[0]);
    let best = outcomes[pick];
    let cfg = decode(&best.theta, s).unwrap_or(Config { points: [0.0; 3], probs: [1.0, 0.0, 0.0] });
    let flip = if best.theta[3] < 0.0 { -1.0 } else { 1.0 };
    let sg = sigma.get();
    let mut pts: Vec<(f64, f64)> = (0..3).map(|i| (flip * cfg.points[i] * sg, cfg.probs[i])).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let input = DiscreteInput::new(pts.iter().map(|x| x.0).collect(), pts.iter().map(|x| x.1).collect())
        .unwrap_or_else(|_| DiscreteInput::antipodal(sqrt(s) * sg));
    CapacityResult {
        value: best.value,
        input,
        quantizer: Quantizer::Threshold { upsilon: fabs(best.theta[3]) * sg },
        converged: best.converged,
        iterations: best.rounds,
        gap_estimate: gap,
    }
}

/// Average-power capacity `C(P)`: maximizes the mutual information over
/// zero-mean three-point inputs with second moment `P` and threshold
/// quantizers. Sequential; see [`solve_capacity_avg_with`] for a custom
/// executor.
pub fn solve_capacity_avg(p: PowerBudget, sigma: NoiseStd) -> CapacityResult {
    solve_capacity_avg_with(p, sigma, |plan| (0..plan.len()).map(|i| plan.refine(i)).collect())
}

/// Like [`solve_capacity_avg`], with `run` refining every start of the plan
/// and returning the outcomes in plan order (possibly in parallel).
pub fn solve_capacity_avg_with<R>(p: PowerBudget, sigma: NoiseStd, run: R) -> CapacityResult
where
    R: FnOnce(&MultistartPlan) -> Vec<StartOutcome>,
{
    let plan = MultistartPlan::new(p, sigma);
    let outcomes = run(&plan);
    plan.reduce(&outcomes, sigma)
}
