//! PPM error probability by the product formula, and a Monte Carlo run
//! that simulates every slot count with `rand_distr`.

use onebit_core::ppm::PpmConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution, Uniform};

use crate::gauss::{oracle_log_q, oracle_q_inv};

/// `(ξ, Υ, q)` for a configuration: amplitude from `ξ² = ln M / rate`,
/// threshold leaving miss probability `ε`, and the false-alarm probability
/// `q = Q(Υ/σ)`.
pub fn operating_point(cfg: &PpmConfig) -> (f64, f64, f64) {
    let s = cfg.sigma.get();
    let xi = ((cfg.m as f64).ln() / cfg.rate_per_energy).sqrt();
    let upsilon = xi - s * oracle_q_inv(cfg.epsilon);
    let q = oracle_log_q(upsilon / s).to_f64().exp();
    (xi, upsilon, q)
}

/// `ε + (1 - ε)(1 - (1 - q)^{M-1})` with the power taken in log domain.
pub fn oracle_ppm_exact(cfg: &PpmConfig) -> f64 {
    let (_, _, q) = operating_point(cfg);
    product_formula(cfg.epsilon, cfg.m, q)
}

pub fn product_formula(epsilon: f64, m: u64, q: f64) -> f64 {
    let none = ((m - 1) as f64 * (-q).ln_1p()).exp();
    epsilon + (1.0 - epsilon) * (1.0 - none)
}

/// Error count over `trials` independent messages.
pub fn monte_carlo_errors(cfg: &PpmConfig, trials: u64, seed: u64) -> u64 {
    let (_, _, q) = operating_point(cfg);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let alarms = Binomial::new(cfg.m - 1, q).expect("valid binomial");
    let unit = Uniform::new(0.0f64, 1.0);
    let mut errors = 0;
    for _ in 0..trials {
        let missed = unit.sample(&mut rng) < cfg.epsilon;
        let extra = alarms.sample(&mut rng);
        if missed || extra > 0 {
            errors += 1;
        }
    }
    errors
}
