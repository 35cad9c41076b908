//! Double-double Gaussian tail, its logarithm and inverse, binary entropy
//! and Bernoulli relative entropy.
//!
//! `Q` comes from the Taylor series `½ - φ(x) Σ x^{2k+1}/(2k+1)!!` for
//! `|x| ≤ 2` and from the Laplace continued fraction for the Mills ratio
//! beyond. A divergent asymptotic series gives a second, independent Mills
//! ratio for large arguments.

use crate::dd::{Dd, FRAC_1_SQRT_2PI, HALF, LN_SQRT_2PI, ONE, ZERO};

const SERIES_LIMIT: f64 = 2.0;

/// Largest `|x|` accepted by the tail oracles.
pub const ORACLE_Q_RANGE: f64 = 40.0;

/// Standard normal density.
pub fn density(x: f64) -> Dd {
    let x = Dd::new(x);
    FRAC_1_SQRT_2PI * (-(x.sqr()) * HALF).exp()
}

fn tail_series(x: f64) -> Dd {
    let xd = Dd::new(x);
    let x2 = xd.sqr();
    let mut term = xd;
    let mut sum = xd;
    let mut k = 1.0;
    while term.abs().hi > 1e-36 * sum.abs().hi {
        term = term * x2 / Dd::new(2.0 * k + 1.0);
        sum = sum + term;
        k += 1.0;
    }
    HALF - density(x) * sum
}

/// Mills ratio `Q(x)/φ(x)` from the continued fraction, `x ≥ 1`.
pub fn mills_continued_fraction(x: f64) -> Dd {
    assert!(x >= 1.0, "continued fraction used below its range");
    let depth = (2.0 * (40.0 / x).powi(2) + 100.0) as u32;
    let xd = Dd::new(x);
    let mut t = ZERO;
    for k in (1..=depth).rev() {
        t = Dd::new(k as f64) / (xd + t);
    }
    ONE / (xd + t)
}

/// Mills ratio from `Σ (-1)^k (2k-1)!!/x^{2k+1}`, truncated at its
/// smallest term; accurate to about `e^{-x²/2}` relative.
pub fn mills_asymptotic(x: f64) -> Dd {
    let xd = Dd::new(x);
    let inv2 = (xd * xd).recip();
    let mut term = xd.recip();
    let mut sum = term;
    let mut k = 1.0;
    loop {
        let next = -(term * inv2 * Dd::new(2.0 * k - 1.0));
        if next.abs().hi >= term.abs().hi || next.abs().hi < 1e-40 * sum.abs().hi {
            break;
        }
        sum = sum + next;
        term = next;
        k += 1.0;
    }
    sum
}

/// `Q(x)` in double-double for `|x| ≤ 37` (below the double underflow).
pub fn oracle_q(x: f64) -> Dd {
    assert!(x.abs() <= ORACLE_Q_RANGE, "oracle_q argument out of range");
    if x < 0.0 {
        return ONE - oracle_q(-x);
    }
    if x <= SERIES_LIMIT {
        tail_series(x)
    } else {
        density(x) * mills_continued_fraction(x)
    }
}

/// Series branch alone, for agreement checks with the continued fraction.
pub fn oracle_q_by_series(x: f64) -> Dd {
    tail_series(x)
}

/// `ln Q(x)` for `|x| ≤ 40`.
pub fn oracle_log_q(x: f64) -> Dd {
    assert!(x.abs() <= ORACLE_Q_RANGE, "oracle_log_q argument out of range");
    if x > SERIES_LIMIT {
        let xd = Dd::new(x);
        -(xd.sqr() * HALF) - LN_SQRT_2PI + mills_continued_fraction(x).ln()
    } else {
        oracle_q(x).ln()
    }
}

/// `Q⁻¹(p)` by bisection on the oracle tail, to about 1e-15 in `x`.
pub fn oracle_q_inv(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "oracle_q_inv needs 0 < p < 1");
    let target = p.ln();
    let (mut lo, mut hi) = (-ORACLE_Q_RANGE, ORACLE_Q_RANGE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        // ln Q is decreasing
        if oracle_log_q(mid).to_f64() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Q(x)` in double precision: the Taylor series for `|x| ≤ 2`, the Mills
/// continued fraction by modified Lentz iteration beyond.
pub fn q_fast(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - q_fast(-x);
    }
    // x² = t² + (x - t)(x + t) with t on a 1/16 grid, so t² is exact
    let t = (16.0 * x).round() / 16.0;
    let dens = (-0.5 * t * t).exp() * (-0.5 * (x - t) * (x + t)).exp() * FRAC_1_SQRT_2PI.hi;
    if x <= SERIES_LIMIT {
        let (mut term, mut sum, mut k) = (x, x, 1.0);
        while term.abs() > 1e-18 * sum.abs() {
            term *= x * x / (2.0 * k + 1.0);
            sum += term;
            k += 1.0;
        }
        return 0.5 - dens * sum;
    }
    dens * mills_lentz(x)
}

// 1/(x + 1/(x + 2/(x + ...))) by modified Lentz.
fn mills_lentz(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let (mut c, mut d) = (x, 0.0);
    for k in 1..5000 {
        let a = k as f64;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= 2.3e-16 {
            break;
        }
    }
    1.0 / f
}

/// `ln Q(x)` in double precision; `ln(1 - Q(-x))` below 0, [`q_fast`]
/// up to 10, the asymptotic Mills series beyond.
pub fn log_q_fast(x: f64) -> f64 {
    if x < 0.0 {
        return (-q_fast(-x)).ln_1p();
    }
    if x <= 10.0 {
        return q_fast(x).ln();
    }
    let inv2 = 1.0 / (x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = -term * inv2 * (2.0 * k - 1.0);
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    -0.5 * x * x - (x * (2.0 * std::f64::consts::PI).sqrt()).ln() + sum.ln()
}

fn xlnx(p: Dd) -> Dd {
    if p.hi <= 0.0 {
        ZERO
    } else {
        p * p.ln()
    }
}

/// Binary entropy in nats.
pub fn oracle_h_b(p: f64) -> Dd {
    let pd = Dd::new(p);
    -(xlnx(pd) + xlnx(ONE - pd))
}

/// `D(Bern(p) ‖ Bern(q))` in nats; infinite when not absolutely continuous.
pub fn oracle_kl(p: f64, q: f64) -> Dd {
    let (pd, qd) = (Dd::new(p), Dd::new(q));
    let (pc, qc) = (ONE - pd, ONE - qd);
    let part = |a: Dd, b: Dd| {
        if a.hi <= 0.0 {
            Ok(ZERO)
        } else if b.hi <= 0.0 {
            Err(())
        } else {
            Ok(a * (a / b).ln())
        }
    };
    match (part(pd, qd), part(pc, qc)) {
        (Ok(a), Ok(b)) => a + b,
        _ => Dd::new(f64::INFINITY),
    }
}
