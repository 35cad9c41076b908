//! Scalar special functions: the Gaussian tail `Q`, its inverse, binary
//! entropy, Bernoulli relative entropy and the first-order Marcum Q-function.
//!
//! Everything here is pure and reentrant. Functions whose argument domain is
//! restricted return [`Result`]; the `Q` tail itself is total.

use alloc::vec::Vec;
use libm::{erfc, exp, expm1, fabs, floor, log, log1p, sqrt};

use crate::quad;
use crate::{Error, Nats, Result};

pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Below this magnitude `Q` comes from `erfc`; above it from the Mills ratio.
const TAIL_SPLIT: f64 = 5.0;
const MILLS_DEPTH: u32 = 48;

/// Largest Marcum argument accepted.
pub const MARCUM_MAX_ARG: f64 = 1.0e4;
/// Above this product of Marcum arguments the defining integral is used.
const MARCUM_SERIES_MAX_AB: f64 = 900.0;

/// `exp(-x²/2)` with the rounding of `x²` split off.
pub(crate) fn exp_half_sq(x: f64) -> f64 {
    let x = fabs(x);
    let head = floor(x * 16.0) / 16.0;
    let del = (x - head) * (x + head);
    exp(-0.5 * head * head) * exp(-0.5 * del)
}

/// Standard normal density.
#[inline]
pub fn phi(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp_half_sq(x)
}

// 1/(x + 1/(x + 2/(x + 3/(x + ...)))), accurate to rounding for x ≥ 5.
fn mills_cf(x: f64) -> f64 {
    let mut t = 0.0;
    let mut k = MILLS_DEPTH;
    while k > 0 {
        t = k as f64 / (x + t);
        k -= 1;
    }
    1.0 / (x + t)
}

/// Mills ratio `Q(x)/φ(x)` for `x ≥ 0`.
pub fn mills_ratio(x: f64) -> f64 {
    if x > TAIL_SPLIT {
        mills_cf(x)
    } else {
        0.5 * erfc(x * FRAC_1_SQRT_2) / phi(x)
    }
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_func(x: f64) -> f64 {
    if x > TAIL_SPLIT {
        phi(x) * mills_cf(x)
    } else if x < -TAIL_SPLIT {
        1.0 - phi(x) * mills_cf(-x)
    } else {
        0.5 * erfc(x * FRAC_1_SQRT_2)
    }
}

/// `ln Q(x)`, finite for every finite `x` even where `Q` underflows.
pub fn log_q(x: f64) -> f64 {
    if x > TAIL_SPLIT {
        -0.5 * x * x - LN_SQRT_2PI + log(mills_cf(x))
    } else if x < 0.0 {
        log1p(-q_func(-x))
    } else {
        log(q_func(x))
    }
}

/// Inverse of [`q_func`] on the open unit interval.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { what: "q_inv argument", value: p });
    }
    if p > 0.5 {
        // 1 - p is exact here.
        Ok(-q_inv_upper(1.0 - p))
    } else {
        Ok(q_inv_upper(p))
    }
}

// p in (0, 1/2]: rational starting point, then Newton on ln Q.
fn q_inv_upper(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let ln_p = log(p);
    let t = sqrt(-2.0 * ln_p);
    let num = 2.515_517 + t * (0.802_853 + t * 0.010_328);
    let den = 1.0 + t * (1.432_788 + t * (0.189_269 + t * 0.001_308));
    let mut x = t - num / den;
    for _ in 0..64 {
        let step = (log_q(x) - ln_p) * mills_ratio(fabs(x));
        x += step;
        if fabs(step) < 1e-13 {
            break;
        }
    }
    x
}

/// Binary entropy in nats with `0 ln 0 = 0`.
pub fn h_b(p: f64) -> Result<Nats> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { what: "binary entropy argument", value: p });
    }
    Ok(binary_entropy(p))
}

#[inline]
pub(crate) fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * log(p) - (1.0 - p) * log1p(-p)
    }
}

// r ln r - r + 1 at r = 1 + u, |u| small.
fn psi_series(u: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = u * u;
    let mut k = 2.0;
    while k < 40.0 {
        let term = pow / (k * (k - 1.0));
        sum += term;
        if fabs(term) <= 1e-18 * fabs(sum) {
            break;
        }
        pow *= -u;
        k += 1.0;
    }
    sum
}

/// One outcome's share `p ln(p/q) - p + q` of a relative entropy.
///
/// Each share is nonnegative; `ln_q` is used when `q` is too small to divide by.
pub(crate) fn kl_term(p: f64, q: f64, ln_q: f64) -> f64 {
    if p <= 0.0 {
        return q;
    }
    if q <= 0.0 || q < 1e-290 {
        if ln_q == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        return (p * (log(p) - ln_q) - p + q).max(0.0);
    }
    let u = (p - q) / q;
    if fabs(u) < 0.125 {
        return q * psi_series(u);
    }
    let r = p / q;
    let v = if r.is_finite() { p * log(r) } else { p * (log(p) - ln_q) };
    (v - p + q).max(0.0)
}

/// Bernoulli relative entropy from probabilities, complements and logs of
/// the reference law. Complements are passed so callers keep tail accuracy.
pub(crate) fn kl_parts(p: f64, pc: f64, q: f64, qc: f64, ln_q: f64, ln_qc: f64) -> f64 {
    kl_term(p, q, ln_q) + kl_term(pc, qc, ln_qc)
}

/// `D(Bern(p) ‖ Bern(q))` in nats; `+∞` when `p` is not absolutely
/// continuous with respect to `q`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<Nats> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain { what: "kl_bernoulli probability", value: v });
        }
    }
    Ok(kl_parts(p, 1.0 - p, q, 1.0 - q, log(q), log1p(-q)))
}

/// `e^{-x} I₀(x)` for `x ≥ 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    if x < 30.0 {
        let quarter = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= quarter / (k * k);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        exp(-x) * sum
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let m = 2.0 * k - 1.0;
            let next = term * m * m / (8.0 * k * x);
            if next >= term || next <= 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / sqrt(2.0 * core::f64::consts::PI * x)
    }
}

/// `Σ_{k≥k0} z^k I_k(x)/I₀(x)` by Miller's backward recurrence, `0 < z ≤ 1`.
fn bessel_ratio_sum(x: f64, z: f64, k0: usize) -> f64 {
    let start = 40 + (10.0 * sqrt(x)) as usize + (x.min(60.0)) as usize;
    let mut y_next = 0.0; // y_{k+1}
    let mut y = 1.0e-30; // y_k
    let mut acc = 0.0; // Σ_{j≥k} z^{j-k} y_j
    let mut acc_k0 = 0.0;
    let mut k = start;
    loop {
        acc = y + z * acc;
        if k == k0 {
            acc_k0 = acc;
        }
        if k == 0 {
            break;
        }
        let y_prev = (2.0 * k as f64 / x) * y + y_next;
        y_next = y;
        y = y_prev;
        k -= 1;
        if y > 1e250 {
            y *= 1e-250;
            y_next *= 1e-250;
            acc *= 1e-250;
            acc_k0 *= 1e-250;
        }
    }
    // y now holds the unnormalized I₀.
    libm::pow(z, k0 as f64) * acc_k0 / y
}

/// First-order Marcum Q-function `Q₁(a, b)`.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    marcum_q1_pair(a, b).map(|(q, _)| q)
}

/// `(Q₁(a, b), 1 - Q₁(a, b))`, each accurate in its own tail.
pub fn marcum_q1_pair(a: f64, b: f64) -> Result<(f64, f64)> {
    for (what, v) in [("marcum a", a), ("marcum b", b)] {
        if !(v >= 0.0) || v.is_infinite() {
            return Err(Error::Domain { what, value: v });
        }
        if v > MARCUM_MAX_ARG {
            return Err(Error::Range { what, value: v, limit: MARCUM_MAX_ARG });
        }
    }
    if b == 0.0 {
        return Ok((1.0, 0.0));
    }
    if a == 0.0 {
        let h = 0.5 * b * b;
        return Ok((exp(-h), -expm1(-h)));
    }
    let ab = a * b;
    if ab > MARCUM_SERIES_MAX_AB {
        return marcum_by_integral(a, b);
    }
    let scale = exp_half_sq(a - b) * bessel_i0_scaled(ab);
    if b > a {
        let q = scale * bessel_ratio_sum(ab, a / b, 0);
        if q > 0.9 {
            let qc = marcum_lower_poisson(a, b);
            Ok((1.0 - qc, qc))
        } else {
            Ok((q, 1.0 - q))
        }
    } else {
        let qc = scale * bessel_ratio_sum(ab, b / a, 1);
        Ok((1.0 - qc, qc))
    }
}

// 1 - Q₁ as a Poisson mixture of gamma lower tails; all terms positive.
fn marcum_lower_poisson(a: f64, b: f64) -> f64 {
    let lam = 0.5 * a * a;
    let y = 0.5 * b * b;
    let mut poisson_y: Vec<f64> = Vec::new();
    let mut t = exp(-y);
    let mut i = 0.0;
    loop {
        poisson_y.push(t);
        i += 1.0;
        t *= y / i;
        if i > y && t < 1e-20 * poisson_y[0].max(1e-300) {
            break;
        }
    }
    // suffix[i] = Σ_{m ≥ i} poisson_y[m]
    let n = poisson_y.len();
    let mut suffix = alloc::vec![0.0; n + 1];
    for m in (0..n).rev() {
        suffix[m] = suffix[m + 1] + poisson_y[m];
    }
    let mut weight = exp(-lam);
    let mut sum = 0.0;
    for j in 0..n {
        sum += weight * suffix[j + 1];
        weight *= lam / (j as f64 + 1.0);
    }
    sum
}

// Defining integral with the Gaussian factor around the mean pulled out.
fn marcum_by_integral(a: f64, b: f64) -> Result<(f64, f64)> {
    let d = fabs(b - a);
    let span = -d + sqrt(d * d + 90.0);
    let front = exp_half_sq(d);
    if front == 0.0 {
        return Ok(if b >= a { (0.0, 1.0) } else { (1.0, 0.0) });
    }
    if b >= a {
        let f = |s: f64| (b + s) * exp(-s * d - 0.5 * s * s) * bessel_i0_scaled(a * (b + s));
        let r = quad::gauss_kronrod(f, 0.0, span, 0.0, 1e-14, 400)?;
        let q = front * r.value;
        Ok((q, 1.0 - q))
    } else {
        let f = |s: f64| (b - s) * exp(-s * d - 0.5 * s * s) * bessel_i0_scaled(a * (b - s));
        let r = quad::gauss_kronrod(f, 0.0, span.min(b), 0.0, 1e-14, 400)?;
        let qc = front * r.value;
        Ok((1.0 - qc, qc))
    }
}
