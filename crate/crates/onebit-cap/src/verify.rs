//! Numerical checks behind the verify subcommand.

use std::f64::consts::{FRAC_1_PI, LN_2};

use onebit_core::capacity::{c_peak, c_sym};
use onebit_core::specfun::{h_b, marcum_q1, phi, q_func, q_inv};
use onebit_core::unit_energy::{f_check, g_check, kl_ratio_threshold, psi, psi_gap, q_lower_bound};
use onebit_core::{NoiseStd, PowerBudget};

use crate::args::Suite;

const UNIT: NoiseStd = NoiseStd::UNIT;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: &'static str, passed: bool, detail: String) -> Check {
    Check { suite, name, passed, detail }
}

fn lin(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn pb(p: f64) -> PowerBudget {
    PowerBudget::new(p).expect("positive power")
}

pub fn specfun_checks() -> Vec<Check> {
    let s = "specfun";
    let mut out = Vec::new();
    let worst = lin(-38.0, 38.0, 7601).map(|x| (q_func(x) + q_func(-x) - 1.0).abs()).fold(0.0, f64::max);
    out.push(check(s, "tail_complement", worst <= 2e-16, format!("max |Q(x) + Q(-x) - 1| = {worst:e}")));
    let worst = lin(-30.0, -1.0, 2901)
        .map(|e| {
            let p = 10f64.powf(e);
            let x = q_inv(p).map_or(f64::NAN, q_func);
            ((x - p) / p).abs()
        })
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    out.push(check(s, "inverse_round_trip", worst < 1e-12, format!("max relative error {worst:e}")));
    let worst = lin(1e-6, 0.5, 1001).map(|p| (h_b(p).unwrap() - h_b(1.0 - p).unwrap()).abs()).fold(0.0, f64::max);
    out.push(check(s, "entropy_symmetry", worst < 1e-15, format!("max |h(p) - h(1-p)| = {worst:e}")));
    // Q₁(β + g, β) ≥ 1 - [e^{-g²/2} - e^{-(2β+g)²/2}]/2
    let mut worst = f64::INFINITY;
    for b in lin(0.0, 30.0, 61) {
        for g in lin(1e-3, 30.0, 61) {
            let a = b + g;
            let bound = 1.0 - 0.5 * ((-0.5 * g * g).exp() - (-0.5 * (a + b).powi(2)).exp());
            let v = marcum_q1(a, b).map_or(f64::NEG_INFINITY, |q| q - bound);
            worst = worst.min(v);
        }
    }
    out.push(check(s, "marcum_lower_bound", worst >= -1e-15, format!("min Q₁ - bound = {worst:e}")));
    out
}

pub fn inequality_checks() -> Vec<Check> {
    let s = "inequalities";
    let mut out = Vec::new();
    let (u_min, g_min) =
        lin(0.0, 2.0, 10_000).map(|u| (u, g_check(u))).fold((0.0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
    out.push(check(s, "g_nonnegative_on_0_2", g_min >= -1e-12, format!("min g = {g_min:e} at u = {u_min}")));
    // with (3/4)φ(u)/u ≤ Q(u): g(u) ≥ φ(u)(1 + Q(u))/2 > 0
    let ok = lin(2.0, 10.0, 801).all(|u| {
        let q = q_func(u);
        let lb = q_lower_bound(u);
        lb <= q && 2.0 * u * lb * (1.0 - q) - phi(u) * (1.0 - 2.0 * q) > 0.0 && g_check(u) > 0.0
    });
    out.push(check(s, "g_positive_branch_2_10", ok, "tail bound and positivity on [2, 10]".into()));
    let f0 = f_check(0.0, UNIT);
    let f_max = lin(1e-4, 8.0, 8000).map(|u| f_check(u, UNIT)).fold(f64::NEG_INFINITY, f64::max);
    out.push(check(
        s,
        "f_peak_at_zero",
        (f0 - 4.0).abs() < 1e-15 && f_max < f0,
        format!("f(0) = {f0}, max over (0, 8] = {f_max}"),
    ));
    let mut bad = None;
    'outer: for x in lin(0.01, 10.0, 100) {
        let p = psi(x, UNIT).unwrap_or(f64::NAN);
        let gap = psi_gap(x, UNIT).unwrap_or(f64::NAN);
        if !(gap > 0.0) {
            bad = Some(format!("ξ²/2 - Ψ({x}) = {gap:e} not positive"));
            break;
        }
        for u in lin(0.0, 10.0, 101) {
            let kl = kl_ratio_threshold(x, u, UNIT).map_or(f64::NAN, |r| r.value * x * x);
            if !(kl <= p * (1.0 + 1e-12)) {
                bad = Some(format!("KL({x}, {u}) = {kl} above Ψ = {p}"));
                break 'outer;
            }
        }
    }
    out.push(check(s, "kl_below_psi_below_half", bad.is_none(), bad.unwrap_or_else(|| "100 x 101 lattice".into())));
    out
}

pub fn limit_checks() -> Vec<Check> {
    let s = "limits";
    let mut out = Vec::new();
    let x = 1e-3;
    let target = 0.5 * (0.5 + FRAC_1_PI);
    let r = psi(x, UNIT).map_or(f64::NAN, |p| p / (x * x));
    out.push(check(s, "psi_small_probe", ((r - target) / target).abs() < 1e-3, format!("Ψ(1e-3)/1e-6 = {r}, limit {target}")));
    let p = 1e-6;
    let r = c_sym(pb(p), UNIT) / p * std::f64::consts::PI;
    out.push(check(s, "antipodal_slope", (r - 1.0).abs() < 1e-3, format!("π C_sym(P)/P = {r}")));
    let r = c_peak(pb(p), UNIT).0 / p * std::f64::consts::PI;
    out.push(check(s, "peak_slope", (r - 1.0).abs() < 5e-3, format!("π C_peak(P)/P = {r}")));
    let top = LN_2 - c_sym(pb(400.0), UNIT);
    out.push(check(s, "antipodal_saturates", (0.0..1e-12).contains(&top), format!("ln 2 - C_sym(400) = {top:e}")));
    out
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Specfun => specfun_checks(),
        Suite::Inequalities => inequality_checks(),
        Suite::Limits => limit_checks(),
        Suite::All => [specfun_checks(), inequality_checks(), limit_checks()].concat(),
    }
}
