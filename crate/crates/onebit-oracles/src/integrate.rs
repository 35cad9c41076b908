//! Adaptive Gauss–Legendre integration by interval bisection.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

const ORDER: usize = 16;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|result|)`: the panel with the
/// largest error estimate is bisected until the summed estimate fits, a
/// panel's estimate being its disagreement with its two halves.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    const MAX_PANELS: usize = 4_000;
    let split = |lo: f64, hi: f64, whole: f64, f: &mut F| {
        let mid = 0.5 * (lo + hi);
        let (l, r) = (panel(f, lo, mid), panel(f, mid, hi));
        let diff = (l + r - whole).abs();
        // below rounding noise the estimate carries no information
        let err = if diff <= 1e-15 * (l.abs() + r.abs()) { 0.0 } else { 0.5 * diff };
        [Panel { lo, hi: mid, value: l, err }, Panel { lo: mid, hi, value: r, err }]
    };
    let whole = panel(&mut f, a, b);
    let mut heap: BinaryHeap<Panel> = split(a, b, whole, &mut f).into_iter().collect();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    loop {
        if err <= abs_tol.max(rel_tol * total.abs()) || heap.len() >= MAX_PANELS {
            // fresh sum sheds the drift of the running total
            return heap.iter().map(|p| p.value).sum();
        }
        let worst = heap.pop().expect("nonempty");
        err -= worst.err;
        total -= worst.value;
        if worst.hi - worst.lo <= 1e-15 * (b - a).abs() {
            total += worst.value;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        for p in split(worst.lo, worst.hi, worst.value, &mut f) {
            err += p.err;
            total += p.value;
            heap.push(p);
        }
        err = err.max(0.0);
    }
}

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Sum of [`integrate`] over consecutive break points.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> f64 {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| integrate(&mut f, w[0], w[1], abs_tol, rel_tol))
        .sum()
}
