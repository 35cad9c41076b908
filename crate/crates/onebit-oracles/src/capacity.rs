//! Exhaustive coarse-lattice capacity search and a dense-grid peak-power
//! capacity, both from `H(Y) - H(Y|X)`.

use crate::gauss::q_fast;

fn entropy(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    t(p) + t(1.0 - p)
}

/// `I(X;Y)` for mass points `x` with probabilities `p` and the threshold
/// quantizer at `upsilon`, as output entropy minus noise entropy.
pub fn mutual_info_entropies(x: &[f64], p: &[f64], upsilon: f64, sigma: f64) -> f64 {
    let w: Vec<f64> = x.iter().map(|&xi| q_fast((upsilon - xi) / sigma)).collect();
    let mean: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum();
    let cond: f64 = w.iter().zip(p).map(|(a, b)| b * entropy(*a)).sum();
    entropy(mean) - cond
}

/// Antipodal input with zero threshold; always a member of the lattice.
pub fn antipodal_value(p: f64, sigma: f64) -> f64 {
    let a = p.sqrt();
    mutual_info_entropies(&[-a, a], &[0.5, 0.5], 0.0, sigma)
}

/// Largest mutual information over a lattice of three-point inputs and
/// thresholds.
///
/// With `t_k = k/(r-1)`: `p₁, p₂ ∈ {t_k}` with `p₁ + p₂ ≤ 1`, shape
/// coordinates `ξ₁, ξ₂ ∈ {2t_k - 1}`, `ξ₃` fixed by the zero mean, all
/// points rescaled to second moment `P`, and `Υ = (2t_k - 1)(max|ξ| + 3σ)`.
/// Lattices with `r - 1` dividing `r' - 1` are nested.
pub fn oracle_capacity_grid(p: f64, sigma: f64, resolution: usize) -> f64 {
    assert!((1..=20).contains(&resolution), "resolution must be in 1..=20");
    let mut best = antipodal_value(p, sigma);
    if resolution == 1 {
        return best;
    }
    let r = resolution;
    let t = |k: usize| k as f64 / (r - 1) as f64;
    for i1 in 0..r {
        for i2 in 0..r - i1 {
            let (p1, p2) = (t(i1), t(i2));
            let p3 = (1.0 - p1 - p2).max(0.0);
            for j1 in 0..r {
                for j2 in 0..r {
                    let (s1, s2) = (2.0 * t(j1) - 1.0, 2.0 * t(j2) - 1.0);
                    let m = p1 * s1 + p2 * s2;
                    let s3 = if p3 > 1e-12 {
                        -m / p3
                    } else if m.abs() < 1e-12 {
                        0.0
                    } else {
                        continue;
                    };
                    let energy = p1 * s1 * s1 + p2 * s2 * s2 + p3 * s3 * s3;
                    if energy <= 0.0 {
                        continue;
                    }
                    let scale = (p / energy).sqrt();
                    let pts = [s1 * scale, s2 * scale, s3 * scale];
                    let probs = [p1, p2, p3];
                    let reach = pts.iter().fold(0.0f64, |a, v| a.max(v.abs())) + 3.0 * sigma;
                    for k in 0..r {
                        let u = (2.0 * t(k) - 1.0) * reach;
                        let v = mutual_info_entropies(&pts, &probs, u, sigma);
                        if v > best {
                            best = v;
                        }
                    }
                }
            }
        }
    }
    best
}

/// Capacity of the binary input `±√P` with threshold `Υ`, maximized over
/// the input law by golden section on the concave objective.
pub fn peak_objective(p: f64, upsilon: f64, sigma: f64) -> f64 {
    let a = p.sqrt();
    let f = |w: f64| mutual_info_entropies(&[-a, a], &[1.0 - w, w], upsilon, sigma);
    let g = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..120 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Dense scan of `Υ ∈ [0, √P + 6σ]`; returns `(capacity, argmax Υ)`.
pub fn oracle_c_peak(p: f64, sigma: f64, points: usize) -> (f64, f64) {
    let top = p.sqrt() + 6.0 * sigma;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..points {
        let u = top * i as f64 / (points - 1) as f64;
        let v = peak_objective(p, u, sigma);
        if v > best.0 {
            best = (v, u);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_one_is_antipodal() {
        for &p in &[0.1, 1.0, 4.0] {
            assert_eq!(oracle_capacity_grid(p, 1.0, 1), antipodal_value(p, 1.0));
        }
    }

    #[test]
    fn nested_lattices_increase() {
        let v: Vec<f64> = [2, 3, 5, 9].iter().map(|&r| oracle_capacity_grid(0.3, 1.0, r)).collect();
        assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
    }

    #[test]
    fn noiseless_limit_is_one_bit() {
        assert!((antipodal_value(400.0, 1.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
