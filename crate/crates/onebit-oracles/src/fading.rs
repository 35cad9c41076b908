//! Rayleigh-fading relative entropies from the polar Marcum construction
//! and double-double exponential laws.

use crate::dd::{Dd, ONE};
use crate::integrate::integrate_breaks;
use crate::marcum::marcum_polar_floor;

/// Per-realization relative entropy for `t = |h|²`, amplitude `x` and
/// threshold slope `μ`, with σ = 1.
pub fn coherent_kl_at(t: f64, x: f64, mu: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let a = (2.0 * t).sqrt() * x;
    let (p, pc) = marcum_polar_floor(a, mu * a, 1e-40);
    let e = mu * mu * t * x * x;
    let (lq, lqc) = (-e, (-(-e).exp_m1()).ln());
    let part = |v: f64, l: f64| if v > 0.0 { v * (v.ln() - l) } else { 0.0 };
    part(p, lq) + part(pc, lqc)
}

/// `E_t[D]/x²` with `t` unit exponential, integrated to `t = 50`.
pub fn oracle_coherent_kl_per_energy(x: f64, mu: f64) -> f64 {
    oracle_coherent_kl_per_energy_tol(x, mu, 1e-12)
}

/// As [`oracle_coherent_kl_per_energy`] with a chosen relative tolerance
/// for the outer integral.
pub fn oracle_coherent_kl_per_energy_tol(x: f64, mu: f64, rel_tol: f64) -> f64 {
    let mut breaks = vec![0.0];
    let mut b = 0.01 / (x * x);
    while b < 50.0 {
        breaks.push(b);
        b *= 3.0;
    }
    breaks.push(50.0);
    let v = integrate_breaks(|t| coherent_kl_at(t, x, mu) * (-t).exp(), &breaks, 0.0, rel_tol);
    v / (x * x)
}

/// Noncoherent relative entropy per unit energy, `p = e^{-Υ²/(x²+1)}`
/// against `q = e^{-Υ²}`, in double-double.
pub fn oracle_noncoherent_ratio(x: f64, u: f64) -> f64 {
    let b = Dd::new(u) * Dd::new(u);
    let a = b / (Dd::new(x) * Dd::new(x) + ONE);
    let (p, q) = ((-a).exp(), (-b).exp());
    let (pc, qc) = (ONE - p, ONE - q);
    // ln p - ln q = b - a exactly
    let kl = p * (b - a) + pc * (pc / qc).ln();
    kl.to_f64() / (x * x)
}

/// Small-probe expansion `q Υ⁴ x²/(2(1 - q))` of the noncoherent ratio,
/// `q = e^{-Υ²}`.
pub fn noncoherent_small_probe(x: f64, u: f64) -> f64 {
    let q = (-u * u).exp();
    q * u.powi(4) * x * x / (2.0 * (1.0 - q))
}

/// Best `(value, ξ, Υ)` over a lattice.
pub fn oracle_noncoherent_lattice(xi_grid: &[f64], upsilon_grid: &[f64]) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &x in xi_grid {
        for &u in upsilon_grid {
            let v = oracle_noncoherent_ratio(x, u);
            if v > best.0 {
                best = (v, x, u);
            }
        }
    }
    best
}
