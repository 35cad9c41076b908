//! Regenerates `derived_values.json`:
//! `cargo run --release -p onebit-oracles --bin derive-values`.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::path::PathBuf;

use onebit_core::ppm::PpmConfig;
use onebit_core::NoiseStd;
use onebit_oracles::capacity::{oracle_c_peak, oracle_capacity_grid};
use onebit_oracles::fading::{
    oracle_coherent_kl_per_energy, oracle_coherent_kl_per_energy_tol, oracle_noncoherent_lattice,
    oracle_noncoherent_ratio,
};
use onebit_oracles::gauss::{oracle_h_b, oracle_kl, oracle_log_q, oracle_q, oracle_q_inv};
use onebit_oracles::marcum::{marcum_defining_integral, marcum_polar};
use onebit_oracles::ppm::{monte_carlo_errors, operating_point, oracle_ppm_exact};
use onebit_oracles::unit::{linspace, logspace, oracle_cue_lattice, oracle_kl_ratio, psi_closed_form, psi_monte_carlo, ratio_leading_term};
use onebit_oracles::OracleConfig;
use serde_json::{json, Map, Value};

/// Powers used by the solver checks.
const ACCEPTANCE_POWERS: [f64; 7] = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0];
const GRID_RESOLUTION: usize = 16;

struct Sink(Map<String, Value>);

impl Sink {
    fn put(&mut self, id: &str, value: f64, oracle: &str) {
        eprintln!("{id:48} {value:.17e}");
        self.0.insert(id.to_string(), json!({ "value": value, "oracle": oracle }));
    }
}

fn main() {
    let cfg = OracleConfig { grid_resolution: GRID_RESOLUTION, mc_samples: 10_000_000, ..OracleConfig::default() };
    let mut out = Sink(Map::new());

    // Gaussian tail and friends
    out.put("specfun.q_func.x1", oracle_q(1.0).to_f64(), "double-double series");
    out.put("specfun.q_func.x1_lo", oracle_q(1.0).lo, "low word of the double-double value");
    out.put("specfun.q_func.x6", oracle_q(6.0).to_f64(), "double-double continued fraction");
    out.put("specfun.q_func.x20", oracle_q(20.0).to_f64(), "double-double continued fraction");
    out.put("specfun.log_q.x40", oracle_log_q(40.0).to_f64(), "double-double continued fraction");
    out.put("specfun.q_inv.p0_01", oracle_q_inv(0.01), "bisection on the double-double tail");
    out.put("specfun.q_inv.p1e-20", oracle_q_inv(1e-20), "bisection on the double-double tail");
    out.put("specfun.h_b.q1", oracle_h_b(oracle_q(1.0).to_f64()).to_f64(), "double-double entropy");
    out.put("specfun.h_b.p0_158655", oracle_h_b(0.158655).to_f64(), "double-double entropy");
    out.put("specfun.kl_bernoulli.p0_9_q0_1", oracle_kl(0.9, 0.1).to_f64(), "double-double formula");
    let (m12, m12c) = marcum_defining_integral(1.0, 2.0);
    out.put("specfun.marcum_q1.a1_b2", m12, "Rician density integral");
    out.put("specfun.marcum_q1.a1_b2_complement", m12c, "Rician density integral");
    let (m_big, m_big_c) = marcum_polar(40.0, 30.0);
    out.put("specfun.marcum_q1.a40_b30", m_big, "polar integral");
    out.put("specfun.marcum_q1.a40_b30_complement", m_big_c, "polar integral");

    // Channel laws
    out.put("channels.threshold_law.q_minus1", oracle_q(-1.0).to_f64(), "double-double series");
    let (coh, _) = marcum_polar(2.0 * SQRT_2, SQRT_2);
    out.put("channels.coherent_radial.h1_x2_u1", coh, "polar integral");
    out.put("channels.noncoherent_radial.x1_u1", (-0.5f64).exp(), "direct evaluation");

    // Capacities
    let q1 = oracle_q(1.0).to_f64();
    out.put("capacity.c_sym.p1", LN_2 - oracle_h_b(q1).to_f64(), "ln 2 minus double-double entropy");
    out.put("capacity.bac.bsc_0_1587", LN_2 - oracle_h_b(0.1587).to_f64(), "binary symmetric reduction");
    let (cpk, cpk_arg) = oracle_c_peak(1.0, 1.0, 6001);
    out.put("capacity.c_peak.p1", cpk, "dense threshold grid, golden section over the input law");
    out.put("capacity.c_peak.p1_argmax", cpk_arg, "dense threshold grid");
    for &p in &[0.1, 10.0] {
        let (v, arg) = oracle_c_peak(p, 1.0, 6001);
        out.put(&format!("capacity.c_peak.p{p}"), v, "dense threshold grid");
        out.put(&format!("capacity.c_peak.p{p}_argmax"), arg, "dense threshold grid");
    }
    for &p in &ACCEPTANCE_POWERS {
        out.put(
            &format!("capacity.grid.p{p}"),
            oracle_capacity_grid(p, 1.0, cfg.grid_resolution),
            "exhaustive three-point lattice",
        );
    }

    // Unit-energy sweeps
    let band = ratio_leading_term(23.0, 3.0);
    out.put("unit_energy.kl_ratio.xi23_u20", oracle_kl_ratio(23.0, 20.0), "log-tail formula");
    out.put("unit_energy.kl_ratio.xi23_u20_leading", band, "leading tail term");
    let (v, x, u) = oracle_cue_lattice(&linspace(1.0, 40.0, 391), &linspace(0.0, 6.0, 121));
    out.put("unit_energy.cue.xi40_mu6", v, "lattice, step 0.1 in xi and 0.05 in mu");
    out.put("unit_energy.cue.xi40_mu6_xi", x, "lattice argmax");
    out.put("unit_energy.cue.xi40_mu6_upsilon", u, "lattice argmax");
    let (v, _, _) = oracle_cue_lattice(&linspace(1.0, 12.0, 111), &linspace(0.0, 4.0, 81));
    out.put("unit_energy.cue.xi12_mu4", v, "lattice, step 0.1 in xi and 0.05 in mu");
    out.put("unit_energy.psi.x1", psi_closed_form(1.0).to_f64(), "closed form in double-double");
    out.put("unit_energy.psi.x_minus1", psi_closed_form(-1.0).to_f64(), "closed form in double-double");
    let small = 1e-3;
    out.put("unit_energy.psi.ratio_x1e-3", psi_closed_form(small).to_f64() / (small * small), "closed form");
    let (mc, se) = psi_monte_carlo(1.0, cfg.mc_samples, cfg.seed);
    out.put("unit_energy.psi.x1_monte_carlo", mc, "control-variate Monte Carlo");
    out.put("unit_energy.psi.x1_monte_carlo_se", se, "standard error of the estimate");
    let mags = logspace(1e-3, 1e2, 400);
    let mut bounded = f64::NEG_INFINITY;
    for sign in [1.0, -1.0] {
        for &m in &mags {
            for &u in &linspace(0.0, 1.0, 201) {
                bounded = bounded.max(oracle_kl_ratio(sign * m, u));
            }
        }
    }
    out.put("unit_energy.bounded_sup.nu1", bounded, "lattice over probe and threshold");

    // Fading
    for &(x, mu) in &[(50.0, 0.95), (30.0, 0.9), (10.0, 0.9), (1.0, 0.5), (0.1, 0.5)] {
        out.put(
            &format!("fading.coherent.xi{x}_mu{mu}"),
            oracle_coherent_kl_per_energy(x, mu),
            "outer adaptive integral over |h|^2, polar Marcum",
        );
    }
    let mut coh_best = f64::NEG_INFINITY;
    for &x in &linspace(2.5, 50.0, 20) {
        for &mu in &linspace(0.05, 0.95, 19) {
            coh_best = coh_best.max(oracle_coherent_kl_per_energy_tol(x, mu, 1e-8));
        }
    }
    out.put("fading.coherent.lattice_mu0_95_xi50", coh_best, "19 x 20 lattice");
    let (nc, nx, nu) = oracle_noncoherent_lattice(&logspace(1e-2, 1e2, 100), &logspace(1e-2, 1e2, 200));
    out.put("fading.noncoherent.lattice", nc, "double-double lattice");
    out.put("fading.noncoherent.lattice_xi", nx, "lattice argmax");
    out.put("fading.noncoherent.lattice_upsilon", nu, "lattice argmax");
    let slice = logspace(1e-2, 1e2, 2000).into_iter().map(|u| oracle_noncoherent_ratio(100.0, u)).fold(f64::NEG_INFINITY, f64::max);
    out.put("fading.noncoherent.slice_xi100", slice, "dense threshold scan");
    out.put("fading.noncoherent.small_xi0_01_u1", oracle_noncoherent_ratio(0.01, 1.0), "double-double formula");

    // PPM
    let ppm = PpmConfig::new(1 << 16, 0.25, 0.1, NoiseStd::UNIT, 10_000, 42).expect("valid configuration");
    let (xi, ups, q) = operating_point(&ppm);
    out.put("ppm.m65536.xi", xi, "amplitude from the rate");
    out.put("ppm.m65536.upsilon", ups, "bisection inverse tail");
    out.put("ppm.m65536.false_alarm", q, "double-double tail");
    out.put("ppm.m65536.exact", oracle_ppm_exact(&ppm), "product formula");
    let errs = monte_carlo_errors(&ppm, cfg.mc_samples, cfg.seed);
    out.put("ppm.m65536.monte_carlo_1e7", errs as f64 / cfg.mc_samples as f64, "ChaCha20 with binomial alarm counts");

    // Spectral landmark
    out.put("spectral.ebno_min.sym_db", 10.0 * (PI * LN_2 / 2.0).log10(), "ln 2 over the symmetric slope 1/pi, in dB");

    let doc = json!({
        "manifest": {
            "command": "cargo run --release -p onebit-oracles --bin derive-values",
            "generator": format!("onebit-oracles {}", env!("CARGO_PKG_VERSION")),
            "oracle_config": {
                "precision_target": cfg.precision_target,
                "grid_resolution": cfg.grid_resolution,
                "mc_samples": cfg.mc_samples,
                "seed": cfg.seed,
            },
        },
        "values": Value::Object(out.0),
    });
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("derived_values.json");
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    std::fs::write(&path, text).expect("write derived_values.json");
    eprintln!("wrote {}", path.display());
}
