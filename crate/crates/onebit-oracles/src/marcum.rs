//! Marcum `Q₁` two ways, neither through the Bessel series.
//!
//! `Q₁(a, b) = P(R ≥ b)` for `R² = (a + Z₁)² + Z₂²` with independent
//! standard normals. [`marcum_polar`] conditions on `Z₂`, leaving a single
//! integral of Gaussian tails. [`marcum_defining_integral`] integrates the
//! Rician density with `I₀` from the periodic trapezoid rule.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::gauss::q_fast;
use crate::integrate::integrate_breaks;

fn density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `e^{-z} I₀(z)` from `(1/π) ∫₀^π e^{z(cos θ - 1)} dθ` by the trapezoid
/// rule, which converges geometrically for periodic integrands.
pub fn bessel_i0_scaled_trapezoid(z: f64) -> f64 {
    assert!(z >= 0.0);
    let n = (64.0 + 12.0 * z.sqrt()).ceil() as usize;
    let h = PI / n as f64;
    let mut sum = 0.5 * (1.0 + (-2.0 * z).exp());
    for k in 1..n {
        let th = k as f64 * h;
        // cos θ - 1 = -2 sin²(θ/2)
        let s = (0.5 * th).sin();
        sum += (-2.0 * z * s * s).exp();
    }
    sum / n as f64
}

// Rician density of R at r with the e^{ar} factor folded into I₀.
fn rician(a: f64, r: f64) -> f64 {
    r * (-0.5 * (r - a) * (r - a)).exp() * bessel_i0_scaled_trapezoid(a * r)
}

/// `(Q₁(a, b), 1 - Q₁(a, b))` by integrating the Rician density on each
/// side of `b`. Intended for `a, b ≲ 30`.
pub fn marcum_defining_integral(a: f64, b: f64) -> (f64, f64) {
    assert!(a >= 0.0 && b >= 0.0);
    let top = a.max(b) + 40.0;
    let mid = a.clamp(0.0, top);
    let upper = integrate_breaks(|r| rician(a, r), &sorted(&[b, mid.max(b), top]), 0.0, 1e-14);
    let lower = integrate_breaks(|r| rician(a, r), &sorted(&[0.0, mid.min(b), b]), 0.0, 1e-14);
    (upper, lower)
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

// Geometric break points on [0, π/2] starting at the scale 1/√(ab + b² + 1).
fn angle_breaks(a: f64, b: f64) -> Vec<f64> {
    let w = 1.0 / (a * b + b * b + 1.0).sqrt();
    let mut v = vec![0.0];
    let mut t = w;
    while t < FRAC_PI_2 {
        v.push(t);
        t *= 2.0;
    }
    v.push(FRAC_PI_2);
    v
}

/// `(Q₁(a, b), 1 - Q₁(a, b))` by conditioning on the quadrature noise,
/// with `z₂ = b sin θ`; each side is computed directly.
pub fn marcum_polar(a: f64, b: f64) -> (f64, f64) {
    marcum_polar_floor(a, b, 0.0)
}

/// [`marcum_polar`] with an absolute accuracy floor on each side.
pub fn marcum_polar_floor(a: f64, b: f64, abs_tol: f64) -> (f64, f64) {
    assert!(a >= 0.0 && b >= 0.0);
    if b == 0.0 {
        return (1.0, 0.0);
    }
    let breaks = angle_breaks(a, b);
    // P(|a + Z₁| ≥ c) and P(|a + Z₁| < c) for c = b cos θ
    let outside = |c: f64| q_fast(c - a) + q_fast(c + a);
    let inside = |c: f64| if c < a { q_fast(a - c) - q_fast(a + c) } else { 1.0 - q_fast(c - a) - q_fast(c + a) };
    let jac = |th: f64| 2.0 * density(b * th.sin()) * b * th.cos();
    let q = integrate_breaks(|th| jac(th) * outside(b * th.cos()), &breaks, abs_tol, 1e-13) + 2.0 * q_fast(b);
    let qc = integrate_breaks(|th| jac(th) * inside(b * th.cos()), &breaks, abs_tol, 1e-13);
    (q, qc)
}

/// Check value for the coherent law: Rayleigh magnitude `a = 0` gives
/// `e^{-b²/2}`.
pub fn marcum_centered(b: f64) -> f64 {
    (-0.5 * b * b).exp()
}
