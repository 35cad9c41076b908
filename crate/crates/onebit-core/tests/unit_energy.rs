mod common;

use std::f64::consts::{FRAC_1_PI, LN_2};

use common::{derived, linspace, logspace, pb, rel, UNIT};
use onebit_core::capacity::{c_sym, mutual_info};
use onebit_core::channels::{induce_law, ChannelKind, DiscreteInput, Quantizer};
use onebit_core::specfun::log_q;
use onebit_core::unit_energy::{
    bounded_threshold_sup, cue_sweep, f_check, g_check, gaussian_second_order, kl_ratio_threshold, psi, psi_gap, q_lower_bound,
    second_order_from,
};
use onebit_core::Error;
use proptest::prelude::*;

const HALF_CEILING: f64 = 0.5;

fn ratio(x: f64, u: f64) -> f64 {
    kl_ratio_threshold(x, u, UNIT).unwrap().value
}

#[test]
fn kl_ratio_examples() {
    assert_eq!(kl_ratio_threshold(0.0, 1.0, UNIT), Err(Error::ZeroInput));
    assert!(rel(ratio(1e-3, 0.0), FRAC_1_PI) < 1e-3);
    // Along Υ = ξ - μ the ratio approaches Q(-μ)/2 only like ln ξ/ξ; at
    // ξ = 23 the band is centered on the finite-ξ leading term.
    let v = ratio(23.0, 20.0);
    assert!(rel(v, derived("unit_energy.kl_ratio.xi23_u20")) < 1e-10);
    assert!(rel(v, derived("unit_energy.kl_ratio.xi23_u20_leading")) < 0.15);
}

#[test]
fn cue_sweep_examples() {
    let single = cue_sweep(UNIT, &[1.0], &[0.0]).unwrap();
    assert_eq!(single.value, ratio(1.0, 1.0));
    let best = cue_sweep(UNIT, &linspace(1.0, 12.0, 111), &linspace(0.0, 4.0, 81)).unwrap();
    let frozen = derived("unit_energy.cue.xi12_mu4");
    assert!(rel(best.value, frozen) < 1e-9);
    assert!(best.value >= 0.755 * HALF_CEILING && best.value < HALF_CEILING);
    assert!(cue_sweep(UNIT, &[], &[1.0]).is_err());
}

#[test]
fn psi_examples() {
    assert_eq!(psi(0.0, UNIT), Err(Error::ZeroInput));
    let small = 1e-3;
    let limit = HALF_CEILING * (0.5 + FRAC_1_PI);
    assert!(rel(psi(small, UNIT).unwrap() / (small * small), limit) < 1e-3);
    assert!(rel(psi(small, UNIT).unwrap() / (small * small), derived("unit_energy.psi.ratio_x1e-3")) < 1e-8);
    let one = psi(1.0, UNIT).unwrap();
    assert!((one - derived("unit_energy.psi.x1")).abs() < 1e-10);
    assert!((one - derived("unit_energy.psi.x1_monte_carlo")).abs() < 1e-4);
    let minus = psi(-1.0, UNIT).unwrap();
    assert!((minus - derived("unit_energy.psi.x_minus1")).abs() < 1e-10);
    assert!(minus != one);
}

#[test]
fn bounded_sup_examples() {
    let r = bounded_threshold_sup(1.0, UNIT).unwrap();
    assert!(r.value >= 0.99 * FRAC_1_PI);
    assert!(r.value < HALF_CEILING);
    assert!(r.value >= derived("unit_energy.bounded_sup.nu1") - 1e-12);
    assert!(r.envelope_holds());
    let env = (LN_2 - log_q(1.0)) / 1e4;
    assert!(rel(r.envelope_at_100, env) < 1e-14);
    for nu in [0.1, 3.0, 10.0] {
        assert!(bounded_threshold_sup(nu, UNIT).unwrap().value < HALF_CEILING);
    }
}

#[test]
fn second_order_against_gaussian_reference() {
    // [½ ln(1+P) - P/2]/P² → -1/4
    assert!(rel(gaussian_second_order(pb(1e-6), UNIT), -0.25) < 1e-5);
    let grid = [1e-1, 3e-2, 1e-2];
    let pc: Vec<(f64, f64)> = grid.iter().map(|&p| (p, c_sym(pb(p), UNIT))).collect();
    let vals = second_order_from(&pc, UNIT);
    for (&(p, v), _) in vals.iter().zip(&grid) {
        assert!(v < 0.0);
        assert!(v < gaussian_second_order(pb(p), UNIT));
    }
    assert!(vals.windows(2).all(|w| w[1].1 < w[0].1));
}

#[test]
fn positivity_and_peak_checks() {
    for i in 0..=10_000 {
        let u = 2.0 * i as f64 / 10_000.0;
        assert!(g_check(u) >= -1e-12, "g({u})");
    }
    assert!(g_check(0.0).abs() < 1e-15);
    assert_eq!(f_check(0.0, UNIT), 4.0);
    for u in linspace(1e-3, 8.0, 500) {
        assert!(f_check(u, UNIT) < 4.0);
    }
    for u in linspace(2.0, 10.0, 200) {
        assert!(q_lower_bound(u) <= onebit_core::specfun::q_func(u));
    }
}

#[test]
fn kl_bounded_by_psi_on_lattice() {
    for &x in &linspace(0.01, 10.0, 80) {
        for sign in [1.0, -1.0] {
            let xi = sign * x;
            let p = psi(xi, UNIT).unwrap();
            for &u in &linspace(0.0, 10.0, 60) {
                let kl = ratio(xi, u) * xi * xi;
                assert!(kl <= p * (1.0 + 1e-12) + 1e-300, "ξ = {xi}, Υ = {u}");
            }
            let gap = psi_gap(xi, UNIT).unwrap();
            assert!(gap > 0.0, "ξ = {xi}");
            assert!((0.5 * xi * xi - gap - p).abs() <= 1e-12 * p.max(1e-3), "ξ = {xi}");
            if x <= 5.0 {
                // the relative gap to ξ²/2 shrinks like Q(ξ) and is above
                // 1e-9 only up to |ξ| ≈ 5.6
                assert!(gap >= 1e-9 * 0.5 * xi * xi, "ξ = {xi}");
            }
        }
    }
}

#[test]
fn flash_signalling_is_necessary() {
    // On-off input with a fixed point ξ₀: I/P stays below the best ratio at
    // ξ₀ as P shrinks, and that ratio is below the ceiling.
    let x0: f64 = 3.0;
    let sup_at = logspace(1e-3, 20.0, 400).into_iter().chain(std::iter::once(0.0)).flat_map(|u| [u, -u]).map(|u| ratio(x0, u)).fold(0.0, f64::max);
    assert!(sup_at < HALF_CEILING);
    for p in [1e-2, 1e-3, 1e-4] {
        let mass = p / (x0 * x0);
        let input = DiscreteInput::new(vec![0.0, x0], vec![1.0 - mass, mass]).unwrap();
        let best_threshold = linspace(-2.0, 6.0, 400)
            .into_iter()
            .map(|u| {
                let law = induce_law(&input, &Quantizer::threshold(u).unwrap(), ChannelKind::Gaussian, UNIT).unwrap();
                mutual_info(&input, &law).unwrap()
            })
            .fold(0.0, f64::max);
        assert!(best_threshold / p <= sup_at * (1.0 + 1e-9));
    }
}

#[test]
fn cue_sweep_monotone_in_grids() {
    let xs = linspace(1.0, 8.0, 15);
    let ms = linspace(0.0, 3.0, 13);
    let base = cue_sweep(UNIT, &xs, &ms).unwrap().value;
    let mut more_x = xs.clone();
    more_x.extend([9.0, 10.0]);
    let mut more_m = ms.clone();
    more_m.extend([3.5, 4.0]);
    assert!(cue_sweep(UNIT, &more_x, &ms).unwrap().value >= base);
    assert!(cue_sweep(UNIT, &xs, &more_m).unwrap().value >= base);
}

proptest! {
    #[test]
    fn reflection_is_exact(x in -30.0f64..30.0, u in -30.0f64..30.0) {
        prop_assume!(x != 0.0);
        prop_assert_eq!(ratio(x, u), ratio(-x, -u));
    }

    #[test]
    fn ratio_below_ceiling(x in 0.01f64..40.0, u in 0.0f64..40.0) {
        prop_assert!(ratio(x, u) < HALF_CEILING);
        prop_assert!(ratio(-x, u) < HALF_CEILING);
    }

    #[test]
    fn cue_sweep_below_ceiling(top in 1.0f64..40.0, mu in 0.0f64..6.0) {
        let v = cue_sweep(UNIT, &linspace(0.5, top, 20), &linspace(0.0, mu, 7)).unwrap().value;
        prop_assert!(v < HALF_CEILING);
    }
}
