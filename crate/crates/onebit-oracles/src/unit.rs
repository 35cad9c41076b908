//! Relative entropy per unit energy with threshold quantizers: lattice
//! searches in double precision, the clipped-output bound in closed form
//! and a Monte Carlo estimate of it.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dd::{Dd, HALF, LN2};
use crate::gauss::{density, log_q_fast, oracle_q};

fn kl_from_logs(lp: f64, lpc: f64, lq: f64, lqc: f64) -> f64 {
    let part = |l: f64, m: f64| if l == f64::NEG_INFINITY { 0.0 } else { l.exp() * (l - m) };
    part(lp, lq) + part(lpc, lqc)
}

/// `D(Bern(Q(u - x)) ‖ Bern(Q(u)))/x²` with σ = 1, from log-tails.
pub fn oracle_kl_ratio(x: f64, u: f64) -> f64 {
    let kl = kl_from_logs(log_q_fast(u - x), log_q_fast(x - u), log_q_fast(u), log_q_fast(-u));
    kl / (x * x)
}

/// Best lattice point `(value, ξ, Υ)` over `ξ ∈ xi_grid`, `Υ = ξ - μ`.
pub fn oracle_cue_lattice(xi_grid: &[f64], mu_grid: &[f64]) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &x in xi_grid {
        for &m in mu_grid {
            let v = oracle_kl_ratio(x, x - m);
            if v > best.0 {
                best = (v, x, x - m);
            }
        }
    }
    best
}

/// `n` evenly spaced points from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `n` log-spaced points from `lo` to `hi`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

/// `Ψ(ξ) = (ξ²/2)(1 - Q(ξ)) + ξφ(ξ) + Q(ξ) ln(2Q(ξ))` in double-double.
pub fn psi_closed_form(x: f64) -> Dd {
    let xd = Dd::new(x);
    let q = oracle_q(x);
    let qc = oracle_q(-x);
    let atom = if q.hi > 0.0 { q * (q.ln() + LN2) } else { Dd::new(0.0) };
    xd.sqr() * HALF * qc + xd * density(x) + atom
}

/// `ξ²/2 - Ψ(ξ) = Q(ξ)(ξ²/2 - ln 2 - ln Q(ξ)) - ξφ(ξ)`, free of the
/// cancellation in the difference.
pub fn psi_deficit(x: f64) -> Dd {
    let xd = Dd::new(x);
    let q = oracle_q(x);
    q * (xd.sqr() * HALF - LN2 - q.ln()) - xd * density(x)
}

/// Monte Carlo estimate of `Ψ(ξ)` and its standard error, with the
/// unclipped log-likelihood ratio (mean `ξ²/2`) as control variate.
pub fn psi_monte_carlo(x: f64, samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let atom = (2.0 * oracle_q(x).to_f64()).ln();
    let n = samples as f64;
    let (mut sl, mut sc, mut sll, mut scc, mut slc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..samples {
        let z: f64 = StandardNormal.sample(&mut rng);
        let y = x + z;
        let full = y * x - 0.5 * x * x;
        let clipped = if y < 0.0 { atom } else { full };
        let c = full - 0.5 * x * x;
        sl += clipped;
        sc += c;
        sll += clipped * clipped;
        scc += c * c;
        slc += clipped * c;
    }
    let (ml, mc) = (sl / n, sc / n);
    let cov = slc / n - ml * mc;
    let var_c = scc / n - mc * mc;
    let beta = cov / var_c;
    let est = ml - beta * mc;
    let var = (sll / n - ml * ml) - beta * cov;
    (est, (var.max(0.0) / n).sqrt())
}

/// Finite-probe value of the ratio along `Υ = ξ - μ`:
/// `Q(-μ)[½ ln 2π + ln(ξ - μ) + (ξ - μ)²/2]/ξ²`, the leading term of the
/// relative entropy when `Q(Υ)` is deep in its tail.
pub fn ratio_leading_term(x: f64, mu: f64) -> f64 {
    let u = x - mu;
    let lift = 0.5 * (2.0 * std::f64::consts::PI).ln() + u.ln() + 0.5 * u * u;
    crate::gauss::q_fast(-mu) * lift / (x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deficit_matches_difference() {
        for &x in &[0.5, 1.0, 2.0, 3.0] {
            let xd = Dd::new(x);
            let direct = xd.sqr() * HALF - psi_closed_form(x);
            assert!(((direct - psi_deficit(x)) / psi_deficit(x)).abs().hi < 1e-25);
        }
    }

    #[test]
    fn monte_carlo_agrees_with_closed_form() {
        let (est, se) = psi_monte_carlo(1.0, 400_000, 3);
        let exact = psi_closed_form(1.0).to_f64();
        assert!((est - exact).abs() < 5.0 * se + 1e-12, "{est} ± {se} vs {exact}");
        assert!(se < 1e-3);
    }

    #[test]
    fn small_probe_limit() {
        let x = 1e-3;
        let r = psi_closed_form(x).to_f64() / (x * x);
        let lim = 0.5 * (0.5 + std::f64::consts::FRAC_1_PI);
        assert!((r / lim - 1.0).abs() < 1e-3);
    }
}
