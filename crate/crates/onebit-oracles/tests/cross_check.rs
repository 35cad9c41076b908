//! The core implementations against the independent references.

use onebit_core::capacity::{c_peak, c_sym, mutual_info, solve_capacity_avg};
use onebit_core::channels::{induce_law, ChannelKind, DiscreteInput, Quantizer};
use onebit_core::fading::{coherent_kl_per_energy, noncoherent_kl_per_energy};
use onebit_core::ppm::{ppm_exact_error, ppm_simulate, PpmConfig};
use onebit_core::specfun::{h_b, kl_bernoulli, log_q, marcum_q1_pair, q_func, q_inv};
use onebit_core::unit_energy::{cue_sweep, kl_ratio_threshold, psi, psi_gap};
use onebit_core::{NoiseStd, PowerBudget};
use onebit_oracles::capacity::{antipodal_value, mutual_info_entropies, oracle_c_peak, oracle_capacity_grid};
use onebit_oracles::fading::{oracle_coherent_kl_per_energy, oracle_noncoherent_ratio};
use onebit_oracles::gauss::{oracle_h_b, oracle_kl, oracle_log_q, oracle_q, oracle_q_inv};
use onebit_oracles::marcum::marcum_polar;
use onebit_oracles::ppm::oracle_ppm_exact;
use onebit_oracles::unit::{linspace, oracle_cue_lattice, oracle_kl_ratio, psi_closed_form, psi_deficit};
use onebit_oracles::{derived, OracleConfig, DERIVED_VALUES};

const UNIT: NoiseStd = NoiseStd::UNIT;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn pb(p: f64) -> PowerBudget {
    PowerBudget::new(p).unwrap()
}

#[test]
fn gaussian_tail() {
    for x in linspace(-8.0, 37.0, 451) {
        let r = oracle_q(x).to_f64();
        assert!(rel(q_func(x), r) < 1e-12, "Q({x})");
    }
    for x in linspace(-5.0, 40.0, 91) {
        assert!(rel(log_q(x), oracle_log_q(x).to_f64()) < 1e-13, "ln Q({x})");
    }
    for p in [1e-300, 1e-100, 1e-20, 1e-5, 0.01, 0.3, 0.5, 0.9, 0.999] {
        let v = q_inv(p).unwrap();
        assert!((v - oracle_q_inv(p)).abs() <= 1e-12 * v.abs().max(1.0), "Q⁻¹({p})");
    }
}

#[test]
fn entropies() {
    for p in linspace(1e-6, 1.0 - 1e-6, 97) {
        assert!(rel(h_b(p).unwrap(), oracle_h_b(p).to_f64()) < 1e-13);
    }
    for (p, q) in [(0.9, 0.1), (0.2, 0.21), (1e-8, 0.5), (0.5, 1e-12), (0.999, 0.998)] {
        assert!(rel(kl_bernoulli(p, q).unwrap(), oracle_kl(p, q).to_f64()) < 1e-11, "D({p}‖{q})");
    }
}

#[test]
fn marcum() {
    for a in [0.1, 1.0, 3.0, 10.0, 25.0, 40.0] {
        for b in [0.2, 1.0, 2.5, 9.0, 30.0] {
            let (q, qc) = marcum_q1_pair(a, b).unwrap();
            let (rq, rqc) = marcum_polar(a, b);
            // the smaller of the pair carries the relative accuracy
            let (got, want) = if rq <= rqc { (q, rq) } else { (qc, rqc) };
            assert!((got - want).abs() <= 1e-10 * want + 1e-300, "Q₁({a}, {b}): {got} vs {want}");
        }
    }
}

#[test]
fn mutual_information_both_ways() {
    let cases: [(&[f64], &[f64], f64); 4] = [
        (&[-1.0, 1.0], &[0.5, 0.5], 0.0),
        (&[0.0, 4.0], &[0.9375, 0.0625], 2.2),
        (&[-2.0, 0.5, 3.0], &[0.2, 0.5, 0.3], -0.4),
        (&[-0.3, 0.1, 0.7], &[0.1, 0.8, 0.1], 0.05),
    ];
    for (x, p, u) in cases {
        let input = DiscreteInput::new(x.to_vec(), p.to_vec()).unwrap();
        let law = induce_law(&input, &Quantizer::threshold(u).unwrap(), ChannelKind::Gaussian, UNIT).unwrap();
        let core = mutual_info(&input, &law).unwrap();
        assert!((core - mutual_info_entropies(x, p, u, 1.0)).abs() < 1e-14);
    }
}

#[test]
fn capacities() {
    for p in [1e-3, 0.1, 1.0, 10.0] {
        assert!(rel(c_sym(pb(p), UNIT), antipodal_value(p, 1.0)) < 1e-12);
    }
    for p in [0.1, 1.0, 10.0] {
        let (v, arg) = c_peak(pb(p), UNIT);
        let (rv, rarg) = oracle_c_peak(p, 1.0, 2001);
        assert!(v >= rv * (1.0 - 1e-12));
        assert!(rel(v, rv) < 1e-8);
        assert!((arg - rarg).abs() < 0.05);
    }
    assert_eq!(oracle_capacity_grid(1.0, 1.0, 1), antipodal_value(1.0, 1.0));
    let coarse: Vec<f64> = [3, 5, 9].iter().map(|&r| oracle_capacity_grid(0.05, 1.0, r)).collect();
    assert!(coarse.windows(2).all(|w| w[1] >= w[0]));
    for p in [0.01, 1.0, 10.0] {
        let res = solve_capacity_avg(pb(p), UNIT);
        assert!(res.value >= oracle_capacity_grid(p, 1.0, 9) * (1.0 - 1e-12));
    }
}

#[test]
fn unit_energy() {
    for x in linspace(-12.0, 40.0, 53) {
        if x == 0.0 {
            continue;
        }
        for u in linspace(-5.0, 40.0, 46) {
            let core = kl_ratio_threshold(x, u, UNIT).unwrap().value;
            let r = oracle_kl_ratio(x, u);
            assert!((core - r).abs() <= 1e-11 * r.max(1e-300), "ξ = {x}, Υ = {u}");
        }
    }
    let xs = linspace(1.0, 12.0, 45);
    let mus = linspace(0.0, 4.0, 17);
    let core = cue_sweep(UNIT, &xs, &mus).unwrap();
    let (r, rx, ru) = oracle_cue_lattice(&xs, &mus);
    assert!(rel(core.value, r) < 1e-11);
    assert_eq!((core.xi, core.upsilon), (rx, ru));
    for x in [1e-3f64, 0.1, 1.0, -1.0, 3.0, 7.5, -10.0] {
        // two O(ξ) terms cancel to leave O(ξ²)
        let tol = 1e-13 / x.abs().min(1.0);
        assert!(rel(psi(x, UNIT).unwrap(), psi_closed_form(x).to_f64()) < tol, "Ψ({x})");
    }
    for x in linspace(-10.0, 36.0, 93).into_iter().chain([1e-3, 1e-2]) {
        if x == 0.0 {
            continue;
        }
        let gap = psi_gap(x, UNIT).unwrap();
        assert!(gap > 0.0, "ξ = {x}");
        // O(ξ) terms cancel to an O(ξ²) gap near zero
        let tol = if x.abs() < 0.1 { 1e-9 } else { 1e-11 };
        assert!(rel(gap, psi_deficit(x).to_f64()) < tol, "gap at ξ = {x}");
    }
}

#[test]
fn fading() {
    for (x, mu) in [(0.3, 0.2), (2.0, 0.5), (7.0, 0.8), (20.0, 0.9)] {
        let core = coherent_kl_per_energy(x, mu, UNIT).unwrap();
        assert!(rel(core, oracle_coherent_kl_per_energy(x, mu)) < 1e-9, "ξ = {x}, μ = {mu}");
    }
    for x in [0.01, 0.5, 3.0, 40.0] {
        for u in [0.05, 1.0, 4.0, 30.0] {
            let core = noncoherent_kl_per_energy(x, u, UNIT).unwrap();
            let r = oracle_noncoherent_ratio(x, u);
            assert!((core - r).abs() <= 1e-11 * r + 1e-300, "ξ = {x}, Υ = {u}");
        }
    }
}

#[test]
fn ppm() {
    for k in [4u32, 10, 16, 20] {
        for eps in [1e-3, 0.1, 0.5] {
            let c = PpmConfig::new(1 << k, 0.25, eps, UNIT, 1, 0).unwrap();
            assert!(rel(ppm_exact_error(&c), oracle_ppm_exact(&c)) < 1e-11);
        }
    }
    let c = PpmConfig::new(1 << 16, 0.25, 0.1, UNIT, 10_000, 42).unwrap();
    let r = ppm_simulate(&c).unwrap();
    assert!(r.ci_low <= derived("ppm.m65536.exact") && derived("ppm.m65536.exact") <= r.ci_high);
    // the 10⁷-trial reference run is within its own 95% interval of the exact value
    let mc = derived("ppm.m65536.monte_carlo_1e7");
    let exact = derived("ppm.m65536.exact");
    assert!((mc - exact).abs() < 1.96 * (exact * (1.0 - exact) / 1e7).sqrt());
}

#[test]
fn frozen_values_reproduce() {
    let doc: serde_json::Value = serde_json::from_str(DERIVED_VALUES).unwrap();
    assert!(doc["manifest"]["command"].as_str().unwrap().contains("derive-values"));
    let cfg = OracleConfig::default();
    assert!(cfg.precision_target <= 1e-12 / 10.0);
    let cheap: [(&str, f64); 6] = [
        ("specfun.q_func.x1", oracle_q(1.0).to_f64()),
        ("specfun.q_func.x20", oracle_q(20.0).to_f64()),
        ("specfun.q_inv.p0_01", oracle_q_inv(0.01)),
        ("specfun.kl_bernoulli.p0_9_q0_1", oracle_kl(0.9, 0.1).to_f64()),
        ("fading.noncoherent.small_xi0_01_u1", oracle_noncoherent_ratio(0.01, 1.0)),
        ("unit_energy.psi.x1", psi_closed_form(1.0).to_f64()),
    ];
    for (id, v) in cheap {
        assert_eq!(derived(id), v, "{id}");
    }
}
