mod common;

use std::f64::consts::{LN_2, PI};

use common::{derived, logspace, pb, rel, UNIT};
use onebit_core::capacity::c_sym;
use onebit_core::spectral::{
    db, ebno_min, secant_slope, slope_at_zero, spectral_curve, sym_second_derivative, wideband_slope, SpectralCurve,
    SpectralMode, SpectralPoint,
};
use onebit_core::PowerBudget;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<PowerBudget> {
    logspace(lo, hi, n).into_iter().map(pb).collect()
}

fn curve(lo: f64, hi: f64, n: usize, mode: SpectralMode) -> SpectralCurve {
    spectral_curve(&grid(lo, hi, n), UNIT, mode).unwrap()
}

/// Eb/N0 of a curve at a given efficiency, by linear interpolation.
fn ebno_at(points: &[SpectralPoint], eff: f64) -> Option<f64> {
    points.windows(2).find(|w| w[0].efficiency_bps_hz <= eff && eff <= w[1].efficiency_bps_hz).map(|w| {
        let t = (eff - w[0].efficiency_bps_hz) / (w[1].efficiency_bps_hz - w[0].efficiency_bps_hz);
        w[0].eb_no_db + t * (w[1].eb_no_db - w[0].eb_no_db)
    })
}

#[test]
fn minimum_energy_per_bit() {
    let g = ebno_min(SpectralMode::Gaussian, UNIT);
    assert!((g - db(LN_2)).abs() < 1e-12);
    assert!((g + 1.59).abs() < 0.01);
    let s = ebno_min(SpectralMode::Sym, UNIT);
    assert!((s - 0.37).abs() < 0.01);
    assert!((s - derived("spectral.ebno_min.sym_db")).abs() < 1e-12);
    assert_eq!(ebno_min(SpectralMode::Opt, UNIT), g);
}

#[test]
fn wideband_slopes() {
    assert_eq!(wideband_slope(SpectralMode::Gaussian), 2.0);
    assert!((wideband_slope(SpectralMode::Sym) - 2.8).abs() < 0.01);
    assert!(rel(wideband_slope(SpectralMode::Sym), 6.0 / (PI - 1.0)) < 1e-15);
    assert_eq!(wideband_slope(SpectralMode::Opt), 0.0);
    // S₀ = 4Ċ²/(-C̈) from the closed forms
    let c1 = slope_at_zero(SpectralMode::Sym, UNIT);
    assert!(rel(4.0 * c1 * c1 / -sym_second_derivative(UNIT), wideband_slope(SpectralMode::Sym)) < 1e-14);
}

#[test]
fn endpoints_reach_the_minimum() {
    for mode in [SpectralMode::Gaussian, SpectralMode::Sym] {
        let c = curve(1e-5, 1.0, 11, mode);
        assert!((c.points[0].eb_no_db - ebno_min(mode, UNIT)).abs() < 0.05, "{mode:?}");
    }
    // the optimal curve converges to its limit only slowly in P; at 1e-2
    // its endpoint lies between that limit and the antipodal endpoint
    let opt = curve(1e-2, 1.0, 3, SpectralMode::Opt);
    let sym = curve(1e-2, 1.0, 3, SpectralMode::Sym);
    assert!(opt.truncated_below.is_none());
    let e = opt.points[0].eb_no_db;
    assert!(e >= ebno_min(SpectralMode::Opt, UNIT) && e <= sym.points[0].eb_no_db, "{e}");
}

#[test]
fn low_end_slope_matches_wideband_slope() {
    for mode in [SpectralMode::Gaussian, SpectralMode::Sym] {
        let c = spectral_curve(&[pb(1e-4), pb(2e-4)], UNIT, mode).unwrap();
        let s = secant_slope(&c.points[0], &c.points[1]);
        assert!(rel(s, wideband_slope(mode)) < 0.05, "{mode:?}: {s}");
    }
}

#[test]
fn second_derivative_by_differences() {
    let (h, two_h) = (1e-3, 2e-3);
    let (c1, c2) = (c_sym(pb(h), UNIT), c_sym(pb(two_h), UNIT));
    // C(0) = 0, so (C(2h) - 2C(h))/h² → C̈(0)
    let fd = (c2 - 2.0 * c1) / (h * h);
    assert!(rel(fd, sym_second_derivative(UNIT)) < 0.01, "{fd}");
}

#[test]
fn point_mapping() {
    let c = curve(1e-3, 10.0, 5, SpectralMode::Sym);
    for p in &c.points {
        let cap = c_sym(pb(p.power), UNIT);
        assert!(rel(p.efficiency_bps_hz, 2.0 / LN_2 * cap) < 1e-15);
        assert!((p.eb_no_db - db(LN_2 / 2.0 * p.power / cap)).abs() < 1e-12);
    }
    assert!(c.points.windows(2).all(|w| w[1].eb_no_db >= w[0].eb_no_db));
}

#[test]
fn optimal_curve_dominance_and_near_antipodal() {
    let (lo, hi, n) = (1e-2, 10.0, 19);
    let gauss = curve(lo, hi, n, SpectralMode::Gaussian);
    let sym = curve(lo, hi, n, SpectralMode::Sym);
    let opt = curve(lo, hi, n, SpectralMode::Opt);
    for ((g, o), s) in gauss.points.iter().zip(&opt.points).zip(&sym.points) {
        assert!(g.efficiency_bps_hz >= o.efficiency_bps_hz);
        assert!(o.efficiency_bps_hz >= s.efficiency_bps_hz * (1.0 - 1e-9));
        assert!(o.eb_no_db <= s.eb_no_db + 1e-9);
    }
    // compare at equal efficiency
    for &eff in &[0.02, 0.05, 0.1, 0.3, 0.6, 0.9] {
        let (Some(eo), Some(es), Some(eg)) = (ebno_at(&opt.points, eff), ebno_at(&sym.points, eff), ebno_at(&gauss.points, eff))
        else {
            panic!("efficiency {eff} outside the curves");
        };
        assert!(eg <= eo + 1e-3 && eo <= es + 1e-3, "{eff}: {eg} {eo} {es}");
        assert!(es - eo <= 0.05, "{eff}: {es} vs {eo}");
    }
}

#[test]
fn grid_errors() {
    assert!(spectral_curve(&[], UNIT, SpectralMode::Sym).is_err());
    assert!(spectral_curve(&[pb(2.0), pb(1.0)], UNIT, SpectralMode::Opt).is_err());
}
