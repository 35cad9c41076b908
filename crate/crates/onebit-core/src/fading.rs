//! Capacity per unit energy on Rayleigh fading with radial one-bit
//! quantizers, for receivers with and without fading knowledge.
//!
//! The fading gain `H` is circularly symmetric complex Gaussian with
//! `E|H|² = 1`, so `t = |H|²` is a unit-mean exponential.

use alloc::vec::Vec;
use libm::{exp, expm1, log, sqrt};

use crate::channels::coherent_radial_pair;
use crate::quad::{gauss_kronrod_breaks, gauss_laguerre};
use crate::specfun::kl_parts;
use crate::{Error, NoiseStd, Result};

const E: f64 = core::f64::consts::E;

/// Quadrature settings for the expectation over `|H|²`.
///
/// `[0, split]` is integrated adaptively, `[split, ∞)` with a shifted
/// Gauss–Laguerre rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingQuadrature {
    pub laguerre_nodes: usize,
    pub split: f64,
    pub rel_tol: f64,
}

impl Default for FadingQuadrature {
    fn default() -> Self {
        Self { laguerre_nodes: 96, split: 8.0, rel_tol: 1e-12 }
    }
}

/// Best lattice point of a fading sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingBest {
    pub value: f64,
    pub xi: f64,
    /// `μ` for coherent sweeps, `Υ` for noncoherent ones.
    pub param: f64,
}

/// Per-realization relative entropy for the coherent radial quantizer with
/// threshold `μ|h||ξ|`, in units where σ = 1; `t = |h|²`.
fn coherent_kl_at(t: f64, x: f64, mu: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let h = sqrt(t);
    let (p, pc) = coherent_radial_pair(h, x, mu * h * x, NoiseStd::UNIT)?;
    let e = mu * mu * t * x * x;
    let q = exp(-e);
    let qc = -expm1(-e);
    Ok(kl_parts(p, pc, q, qc, -e, log(qc)))
}

/// `E_H[D(P_{Y|H,X=ξ} ‖ P_{Y|H,X=0})]/|ξ|²` for the radial quantizer with
/// threshold `μ|H||ξ|`.
pub fn coherent_kl_per_energy(xi_mag: f64, mu: f64, sigma: NoiseStd) -> Result<f64> {
    coherent_kl_per_energy_with(xi_mag, mu, sigma, &FadingQuadrature::default())
}

pub fn coherent_kl_per_energy_with(xi_mag: f64, mu: f64, sigma: NoiseStd, quad: &FadingQuadrature) -> Result<f64> {
    if !(xi_mag > 0.0) || !xi_mag.is_finite() {
        return Err(Error::Domain { what: "probe magnitude", value: xi_mag });
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Domain { what: "threshold slope", value: mu });
    }
    let x = xi_mag / sigma.get();
    let mut failure = None;
    let mut f = |t: f64| match coherent_kl_at(t, x, mu) {
        Ok(v) => v * exp(-t),
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let mut breaks: Vec<f64> = Vec::with_capacity(6);
    breaks.push(0.0);
    for c in [0.1, 1.0, 10.0] {
        let b = c / (x * x);
        if b < quad.split {
            breaks.push(b);
        }
    }
    breaks.push(quad.split);
    let head = gauss_kronrod_breaks(&mut f, &breaks, 0.0, quad.rel_tol, 4000)?;
    let (nodes, weights) = gauss_laguerre(quad.laguerre_nodes);
    let mut tail = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        tail += w * coherent_kl_at(quad.split + t, x, mu)?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let total = head.value + exp(-quad.split) * tail;
    Ok(total / (x * x) / sigma.variance())
}

/// Best coherent ratio over a `(μ, |ξ|)` lattice.
pub fn coherent_cue_lower_bound(mu_grid: &[f64], xi_grid: &[f64], sigma: NoiseStd) -> Result<FadingBest> {
    if mu_grid.is_empty() || xi_grid.is_empty() {
        return Err(Error::InvalidGrid("coherent lattice must be nonempty"));
    }
    let mut best = FadingBest { value: f64::NEG_INFINITY, xi: 0.0, param: 0.0 };
    for &xi in xi_grid {
        for &mu in mu_grid {
            let v = coherent_kl_per_energy(xi, mu, sigma)?;
            if v > best.value {
                best = FadingBest { value: v, xi, param: mu };
            }
        }
    }
    Ok(best)
}

// D(Bern(p) ‖ Bern(q)) for p = exp(-a), q = exp(-b), a < b or a > b.
fn kl_exp_laws(a: f64, b: f64) -> f64 {
    let (p, q) = (exp(-a), exp(-b));
    let (pc, qc) = (-expm1(-a), -expm1(-b));
    let d = b - a;
    if d.abs() < 1e-3 * b.max(1.0) {
        // p = q e^{d}; keep the relative offsets exact.
        let u = expm1(d);
        let uc = -q * u / qc;
        q * psi_rel(u) + qc * psi_rel(uc)
    } else {
        kl_parts(p, pc, q, qc, -b, log(qc))
    }
}

// (1+u) ln(1+u) - u
fn psi_rel(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut sum = 0.0;
        let mut pow = u * u;
        let mut k = 2.0;
        while k < 30.0 {
            sum += pow / (k * (k - 1.0));
            pow *= -u;
            k += 1.0;
        }
        sum
    } else {
        (1.0 + u) * libm::log1p(u) - u
    }
}

/// `D(P_{Y|X=ξ} ‖ P_{Y|X=0})/|ξ|²` for the noncoherent radial quantizer.
pub fn noncoherent_kl_per_energy(xi_mag: f64, upsilon: f64, sigma: NoiseStd) -> Result<f64> {
    if xi_mag == 0.0 {
        return Err(Error::ZeroInput);
    }
    if !(xi_mag > 0.0) || !xi_mag.is_finite() {
        return Err(Error::Domain { what: "probe magnitude", value: xi_mag });
    }
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::Domain { what: "radial threshold", value: upsilon });
    }
    let x = xi_mag / sigma.get();
    let u = upsilon / sigma.get();
    let a = u * u / (x * x + 1.0);
    let b = u * u;
    Ok(kl_exp_laws(a, b) / (x * x) / sigma.variance())
}

/// Relative entropy per unit energy of an annulus `{r₁ ≤ |y| ≤ r₂}` on the
/// noncoherent channel.
pub fn annulus_kl_per_energy(xi_mag: f64, r_inner: f64, r_outer: f64, sigma: NoiseStd) -> Result<f64> {
    if !(xi_mag > 0.0) {
        return Err(Error::ZeroInput);
    }
    if !(0.0 <= r_inner && r_inner <= r_outer) {
        return Err(Error::Domain { what: "annulus radius", value: r_inner });
    }
    let s2 = sigma.variance();
    let v1 = xi_mag * xi_mag + s2;
    // ln P(r₁ ≤ |Y| ≤ r₂) without underflow for far-out annuli
    let log_law = |v: f64| {
        let (a1, a2) = (r_inner * r_inner / v, r_outer * r_outer / v);
        -a1 + log(-expm1(a1 - a2))
    };
    let (lp, lq) = (log_law(v1), log_law(s2));
    let (p, q) = (exp(lp), exp(lq));
    let kl = kl_parts(p, 1.0 - p, q, 1.0 - q, lq, libm::log1p(-q));
    Ok(kl / (xi_mag * xi_mag))
}

/// Best noncoherent ratio over a `(|ξ|, Υ)` lattice.
pub fn noncoherent_cue_sup(xi_grid: &[f64], upsilon_grid: &[f64], sigma: NoiseStd) -> Result<FadingBest> {
    if xi_grid.is_empty() || upsilon_grid.is_empty() {
        return Err(Error::InvalidGrid("noncoherent lattice must be nonempty"));
    }
    let mut best = FadingBest { value: f64::NEG_INFINITY, xi: 0.0, param: 0.0 };
    for &xi in xi_grid {
        for &u in upsilon_grid {
            let v = noncoherent_kl_per_energy(xi, u, sigma)?;
            if v > best.value {
                best = FadingBest { value: v, xi, param: u };
            }
        }
    }
    Ok(best)
}

/// `|ξ|²/(eσ²) + 2/e`, an upper bound on the noncoherent relative entropy.
pub fn noncoherent_kl_envelope(xi_mag: f64, sigma: NoiseStd) -> f64 {
    xi_mag * xi_mag / (E * sigma.variance()) + 2.0 / E
}

/// `1/σ² - ln(1 + |ξ|²/σ²)/|ξ|²`, the unquantized noncoherent ratio.
pub fn noncoherent_unquantized_ratio(xi_mag: f64, sigma: NoiseStd) -> f64 {
    let s2 = sigma.variance();
    1.0 / s2 - libm::log1p(xi_mag * xi_mag / s2) / (xi_mag * xi_mag)
}
