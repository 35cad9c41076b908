//! Small optimizers: golden-section search and a finite-difference BFGS.
//!
//! Both maximize; infeasible points are signalled by a non-finite objective.

use alloc::vec;
use alloc::vec::Vec;
use libm::{fabs, sqrt};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of a one-dimensional search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMax {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]` until the
/// bracket is narrower than `tol`. Ties go to the left endpoint.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> LineMax {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iters += 1;
    }
    let mut best = if f1 >= f2 { LineMax { arg: x1, value: f1 } } else { LineMax { arg: x2, value: f2 } };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.value || (v == best.value && x < best.arg) {
            best = LineMax { arg: x, value: v };
        }
    }
    best
}

/// Maximize `f` over `[lo, hi]`: scan `n` equal cells, then golden-section
/// refine around the best grid point. Ties go to the smaller argument.
pub fn grid_golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize, tol: f64) -> LineMax {
    let n = n.max(2);
    let step = (hi - lo) / n as f64;
    let mut best = LineMax { arg: lo, value: f(lo) };
    for i in 1..=n {
        let x = if i == n { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v > best.value {
            best = LineMax { arg: x, value: v };
        }
    }
    let a = (best.arg - step).max(lo);
    let b = (best.arg + step).min(hi);
    let refined = golden_max(&mut f, a, b, tol);
    if refined.value > best.value {
        refined
    } else {
        best
    }
}

/// Outcome of a BFGS run.
#[derive(Debug, Clone, PartialEq)]
pub struct BfgsResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Central-difference gradient; falls back to one-sided differences at
/// infeasible neighbours.
fn gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], fx: f64, g: &mut [f64]) {
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-6 * (1.0 + fabs(x[i]));
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        g[i] = match (up.is_finite(), down.is_finite()) {
            (true, true) => (up - down) / (2.0 * h),
            (true, false) => (up - fx) / h,
            (false, true) => (fx - down) / h,
            (false, false) => 0.0,
        };
    }
}

/// Maximize a smooth `f` from `x0` by BFGS with a backtracking Armijo line
/// search and finite-difference gradients.
///
/// Stops when an iteration improves by less than `rel_tol·|f|` (plus a tiny
/// absolute floor) twice in a row, or after `max_iter` iterations.
pub fn bfgs_max<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], rel_tol: f64, max_iter: usize) -> BfgsResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return BfgsResult { x, value: fx, iterations: 0, converged: false };
    }
    let mut g = vec![0.0; n];
    gradient(&mut f, &x, fx, &mut g);
    // Inverse Hessian approximation of -f.
    let mut h = identity(n);
    let mut stalls = 0;
    let mut trial = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    for it in 0..max_iter {
        // ascent direction d = H g
        let mut d: Vec<f64> = (0..n).map(|i| (0..n).map(|j| h[i * n + j] * g[j]).sum()).collect();
        let mut slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
        if !(slope > 0.0) {
            h = identity(n);
            d.copy_from_slice(&g);
            slope = g.iter().map(|v| v * v).sum();
        }
        if slope == 0.0 {
            return BfgsResult { x, value: fx, iterations: it, converged: true };
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            for i in 0..n {
                trial[i] = x[i] + step * d[i];
            }
            let ft = f(&trial);
            if ft.is_finite() && ft >= fx + 1e-4 * step * slope {
                accepted = Some(ft);
                break;
            }
            step *= 0.5;
        }
        let Some(f_new) = accepted else {
            return BfgsResult { x, value: fx, iterations: it, converged: true };
        };
        gradient(&mut f, &trial, f_new, &mut g_new);
        let gain = f_new - fx;
        // s = step d, y = -(g_new - g) for the minimization of -f
        let s: Vec<f64> = d.iter().map(|v| v * step).collect();
        let y: Vec<f64> = (0..n).map(|i| g[i] - g_new[i]).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-300 {
            let hy: Vec<f64> = (0..n).map(|i| (0..n).map(|j| h[i * n + j] * y[j]).sum()).collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        x.copy_from_slice(&trial);
        fx = f_new;
        g.copy_from_slice(&g_new);
        if gain <= rel_tol * fabs(fx) + 1e-300 {
            stalls += 1;
            if stalls >= 2 {
                return BfgsResult { x, value: fx, iterations: it + 1, converged: true };
            }
        } else {
            stalls = 0;
        }
    }
    BfgsResult { x, value: fx, iterations: max_iter, converged: false }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}
