use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};

use onebit_core::capacity::{c_peak, c_sym, solve_capacity_avg_with, CapacityResult, StartOutcome};
use onebit_core::channels::{DiscreteInput, Quantizer};
use onebit_core::fading::{coherent_kl_per_energy, noncoherent_kl_per_energy};
use onebit_core::ppm::{report_from_counts, simulate_range, PpmConfig, PpmReport, TrialCounts};
use onebit_core::spectral::{ebno_min, opt_curve_from, spectral_curve, wideband_slope, SpectralMode};
use onebit_core::specfun::q_func;
use onebit_core::unit_energy::kl_ratio_threshold;
use onebit_core::{NoiseStd, PowerBudget};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::args::{CapacityArgs, CapacityMode, Channel, CueArgs, OutFormat, PpmArgs, Spacing, SpectralArgs, SpectralModeArg};
use crate::output::{fmt_f64, num, nums, write_csv, write_json, write_manifest, Obj, RunManifest};
use crate::Failure;

/// Trials per work item; fixed so that results do not depend on the pool.
pub const PPM_CHUNK: u64 = 1 << 14;

fn sigma_arg(s: f64) -> Result<NoiseStd, Failure> {
    NoiseStd::new(s).map_err(|_| Failure::usage(format!("--sigma must be positive and finite, got {s}")))
}

fn power_arg(flag: &str, p: f64) -> Result<PowerBudget, Failure> {
    PowerBudget::new(p).map_err(|_| Failure::usage(format!("{flag} must be positive and finite, got {p}")))
}

fn io_fail(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::io(format!("cannot write {}: {e}", path.display()))
}

fn emit_json(path: &Path, value: &serde_json::Value, manifest: &RunManifest) -> Result<(), Failure> {
    write_json(path, value).map_err(io_fail(path))?;
    write_manifest(path, manifest).map_err(io_fail(path))
}

fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<String>], manifest: &RunManifest) -> Result<(), Failure> {
    write_csv(path, header, rows).map_err(io_fail(path))?;
    write_manifest(path, manifest).map_err(io_fail(path))
}

/// Average-power capacity with the multistarts spread over the pool.
pub fn solve_avg_parallel(p: PowerBudget, sigma: NoiseStd, pool: &ThreadPool) -> CapacityResult {
    solve_capacity_avg_with(p, sigma, |plan| {
        pool.install(|| (0..plan.len()).into_par_iter().map(|i| plan.refine(i)).collect::<Vec<StartOutcome>>())
    })
}

/// Capacity-achieving probability of `+A` on the binary channel seen by the
/// peak-limited input `±A` with threshold `Υ`.
fn peak_input_prob(a: f64, upsilon: f64, sigma: NoiseStd) -> f64 {
    let s = sigma.get();
    let lo = q_func((upsilon + a) / s);
    let hi = q_func((upsilon - a) / s);
    if !(hi - lo > 1e-300) {
        return 0.5;
    }
    let h = |p: f64| onebit_core::specfun::h_b(p).unwrap_or(0.0);
    // dI/dπ = 0 puts the output law at 1/(1 + e^β)
    let beta = (h(hi) - h(lo)) / (hi - lo);
    let r = 1.0 / (1.0 + beta.exp());
    ((r - lo) / (hi - lo)).clamp(0.0, 1.0)
}

pub fn cmd_capacity(a: &CapacityArgs, out_dir: &Path, pool: &ThreadPool) -> Result<Vec<PathBuf>, Failure> {
    let sigma = sigma_arg(a.sigma)?;
    let p = power_arg("--power", a.power)?;
    let (mode, result) = match a.mode {
        CapacityMode::Sym => {
            let r = CapacityResult {
                value: c_sym(p, sigma),
                input: DiscreteInput::antipodal(p.get().sqrt()),
                quantizer: Quantizer::threshold(0.0).expect("zero threshold"),
                converged: true,
                iterations: 0,
                gap_estimate: 0.0,
            };
            ("sym", r)
        }
        CapacityMode::Peak => {
            let (value, upsilon) = c_peak(p, sigma);
            let amp = p.get().sqrt();
            let pi = peak_input_prob(amp, upsilon, sigma);
            let r = CapacityResult {
                value,
                input: DiscreteInput::new(vec![-amp, amp], vec![1.0 - pi, pi]).expect("binary input"),
                quantizer: Quantizer::threshold(upsilon).expect("finite threshold"),
                converged: true,
                iterations: 0,
                gap_estimate: 0.0,
            };
            ("peak", r)
        }
        CapacityMode::Avg => ("avg", solve_avg_parallel(p, sigma, pool)),
    };
    let threshold = match result.quantizer {
        Quantizer::Threshold { upsilon } => upsilon,
        _ => f64::NAN,
    };
    let manifest = RunManifest {
        subcommand: "capacity",
        parameters: Obj::new()
            .v("mode", mode)
            .f("power", p.get())
            .f("sigma", sigma.get())
            .v("out", if a.out == OutFormat::Json { "json" } else { "csv" })
            .build(),
        seed: None,
        threads: pool.current_num_threads(),
    };
    let path = match a.out {
        OutFormat::Json => {
            let path = out_dir.join(format!("capacity_{mode}.json"));
            let body = Obj::new()
                .v("mode", mode)
                .f("power", p.get())
                .f("sigma", sigma.get())
                .f("value_nats", result.value)
                .f("value_bits", result.value / LN_2)
                .v("input", Obj::new().v("points", nums(result.input.points())).v("probs", nums(result.input.probs())).build())
                .f("threshold", threshold)
                .v("converged", result.converged)
                .v("iterations", result.iterations)
                .f("gap_estimate_nats", result.gap_estimate)
                .build();
            emit_json(&path, &body, &manifest)?;
            path
        }
        OutFormat::Csv => {
            let path = out_dir.join(format!("capacity_{mode}.csv"));
            let header = ["mode", "power", "sigma", "value_nats", "value_bits", "threshold", "converged", "point", "prob"];
            let rows: Vec<Vec<String>> = result
                .input
                .points()
                .iter()
                .zip(result.input.probs())
                .map(|(&x, &w)| {
                    vec![
                        mode.to_string(),
                        fmt_f64(p.get()),
                        fmt_f64(sigma.get()),
                        fmt_f64(result.value),
                        fmt_f64(result.value / LN_2),
                        fmt_f64(threshold),
                        result.converged.to_string(),
                        fmt_f64(x),
                        fmt_f64(w),
                    ]
                })
                .collect();
            emit_csv(&path, &header, &rows, &manifest)?;
            path
        }
    };
    if !result.converged {
        return Err(Failure::caveat("solver did not converge; result written with converged=false", vec![path]));
    }
    Ok(vec![path])
}

fn grid(lo: f64, hi: f64, n: usize, spacing: Spacing, what: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::usage(format!("bad {what} grid: {why}"));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(bad("bounds must be finite"));
    }
    if n == 0 {
        return Err(bad("count must be positive"));
    }
    if n == 1 {
        return if lo == hi { Ok(vec![lo]) } else { Err(bad("a single point needs equal bounds")) };
    }
    if !(hi > lo) {
        return Err(bad("max must exceed min"));
    }
    let t = |i: usize| i as f64 / (n - 1) as f64;
    match spacing {
        Spacing::Lin => Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * t(i) }).collect()),
        Spacing::Log => {
            if !(lo > 0.0) {
                return Err(bad("log spacing needs a positive min"));
            }
            let (a, b) = (lo.ln(), hi.ln());
            Ok((0..n).map(|i| if i == n - 1 { hi } else { (a + (b - a) * t(i)).exp() }).collect())
        }
    }
}

struct CueDefaults {
    xi: (f64, f64, usize),
    param: (f64, f64, usize),
    spacing: Spacing,
    param_name: &'static str,
    ceiling: f64,
}

fn cue_defaults(c: Channel) -> CueDefaults {
    match c {
        Channel::Awgn => CueDefaults { xi: (1.0, 40.0, 157), param: (0.0, 6.0, 121), spacing: Spacing::Lin, param_name: "mu", ceiling: 0.5 },
        Channel::Coherent => {
            CueDefaults { xi: (2.5, 50.0, 20), param: (0.05, 0.95, 19), spacing: Spacing::Lin, param_name: "mu", ceiling: 1.0 }
        }
        Channel::Noncoherent => CueDefaults {
            xi: (1e-2, 1e2, 100),
            param: (1e-2, 1e2, 200),
            spacing: Spacing::Log,
            param_name: "upsilon",
            ceiling: 1.0,
        },
    }
}

pub fn cmd_cue(a: &CueArgs, out_dir: &Path, pool: &ThreadPool) -> Result<Vec<PathBuf>, Failure> {
    let sigma = sigma_arg(a.sigma)?;
    let s = sigma.get();
    let d = cue_defaults(a.channel);
    let spacing = a.spacing.unwrap_or(d.spacing);
    // grid defaults are in units of σ
    let xi_grid = grid(
        a.xi_min.unwrap_or(d.xi.0 * s),
        a.xi_max.unwrap_or(d.xi.1 * s),
        a.xi_count.unwrap_or(d.xi.2),
        spacing,
        "probe",
    )?;
    let scale = if a.channel == Channel::Coherent { 1.0 } else { s };
    let param_grid = grid(
        a.param_min.unwrap_or(d.param.0 * scale),
        a.param_max.unwrap_or(d.param.1 * scale),
        a.param_count.unwrap_or(d.param.2),
        spacing,
        d.param_name,
    )?;
    if xi_grid.iter().any(|&x| !(x > 0.0)) {
        return Err(Failure::usage("bad probe grid: magnitudes must be positive".into()));
    }
    match a.channel {
        Channel::Awgn if param_grid.iter().any(|&m| m < 0.0) => {
            return Err(Failure::usage("bad mu grid: back-off must be nonnegative".into()))
        }
        Channel::Coherent if param_grid.iter().any(|&m| !(m > 0.0 && m < 1.0)) => {
            return Err(Failure::usage("bad mu grid: slopes must lie in (0, 1)".into()))
        }
        Channel::Noncoherent if param_grid.iter().any(|&u| !(u > 0.0)) => {
            return Err(Failure::usage("bad upsilon grid: thresholds must be positive".into()))
        }
        _ => {}
    }
    let channel = a.channel;
    let rows: Vec<(f64, f64, f64)> = pool.install(|| {
        xi_grid
            .par_iter()
            .flat_map_iter(|&xi| {
                param_grid.iter().map(move |&m| {
                    let v = match channel {
                        Channel::Awgn => kl_ratio_threshold(xi, xi - m, sigma).map(|r| r.value),
                        Channel::Coherent => coherent_kl_per_energy(xi, m, sigma),
                        Channel::Noncoherent => noncoherent_kl_per_energy(xi, m, sigma),
                    };
                    v.map(|v| (xi, m, v))
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(|e| Failure::numeric(format!("lattice evaluation failed: {e}")))?;
    // first maximum in lattice order
    let best = rows.iter().fold(rows[0], |b, r| if r.2 > b.2 { *r } else { b });
    let ceiling = d.ceiling / sigma.variance();
    let name = match a.channel {
        Channel::Awgn => "awgn",
        Channel::Coherent => "coherent",
        Channel::Noncoherent => "noncoherent",
    };
    let manifest = RunManifest {
        subcommand: "cue",
        parameters: Obj::new()
            .v("channel", name)
            .f("sigma", s)
            .v("xi_grid", Obj::new().f("min", xi_grid[0]).f("max", *xi_grid.last().unwrap()).v("count", xi_grid.len()).build())
            .v(
                d.param_name,
                Obj::new().f("min", param_grid[0]).f("max", *param_grid.last().unwrap()).v("count", param_grid.len()).build(),
            )
            .v("spacing", if spacing == Spacing::Lin { "lin" } else { "log" })
            .build(),
        seed: None,
        threads: pool.current_num_threads(),
    };
    let mut best_obj = Obj::new().f("xi", best.0).f(d.param_name, best.1).f("value_nats_per_energy", best.2);
    if a.channel == Channel::Awgn {
        best_obj = best_obj.f("upsilon", best.0 - best.1);
    }
    let json_path = out_dir.join(format!("cue_{name}.json"));
    let body = Obj::new()
        .v("channel", name)
        .f("sigma", s)
        .f("ceiling_nats_per_energy", ceiling)
        .v("below_ceiling", best.2 < ceiling)
        .v("best", best_obj.build())
        .v("lattice_points", rows.len())
        .build();
    emit_json(&json_path, &body, &manifest)?;
    let csv_path = out_dir.join(format!("cue_{name}_lattice.csv"));
    let header = ["xi", d.param_name, "kl_per_energy_nats", "ceiling_nats_per_energy"];
    let ceiling_text = fmt_f64(ceiling);
    let table: Vec<Vec<String>> =
        rows.iter().map(|r| vec![fmt_f64(r.0), fmt_f64(r.1), fmt_f64(r.2), ceiling_text.clone()]).collect();
    emit_csv(&csv_path, &header, &table, &manifest)?;
    Ok(vec![json_path, csv_path])
}

/// Simulate in fixed chunks on the pool; the counts do not depend on the
/// number of workers.
pub fn ppm_parallel(cfg: &PpmConfig, pool: &ThreadPool) -> PpmReport {
    let chunks = cfg.trials.div_ceil(PPM_CHUNK);
    let counts = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| simulate_range(cfg, c * PPM_CHUNK, ((c + 1) * PPM_CHUNK).min(cfg.trials)))
            .reduce(TrialCounts::default, |a, b| a + b)
    });
    report_from_counts(cfg, counts)
}

pub fn cmd_ppm(a: &PpmArgs, out_dir: &Path, pool: &ThreadPool) -> Result<Vec<PathBuf>, Failure> {
    let sigma = sigma_arg(a.sigma)?;
    if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
        return Err(Failure::usage(format!("--epsilon must lie in (0, 1), got {}", a.epsilon)));
    }
    if a.m < 2 {
        return Err(Failure::usage(format!("--m must be at least 2, got {}", a.m)));
    }
    if !(a.rate > 0.0 && a.rate.is_finite()) {
        return Err(Failure::usage(format!("--rate must be positive and finite, got {}", a.rate)));
    }
    let cfg = PpmConfig::new(a.m, a.rate, a.epsilon, sigma, a.trials, a.seed)
        .map_err(|e| Failure::usage(format!("invalid configuration: {e}")))?;
    let r = ppm_parallel(&cfg, pool);
    let manifest = RunManifest {
        subcommand: "ppm",
        parameters: Obj::new()
            .v("m", a.m)
            .f("rate_per_energy", a.rate)
            .f("epsilon", a.epsilon)
            .v("trials", a.trials)
            .f("sigma", sigma.get())
            .build(),
        seed: Some(a.seed),
        threads: pool.current_num_threads(),
    };
    let path = out_dir.join("ppm.json");
    let body = Obj::new()
        .v("m", a.m)
        .f("rate_per_energy", a.rate)
        .f("epsilon", a.epsilon)
        .f("sigma", sigma.get())
        .v("seed", a.seed)
        .f("xi", r.xi)
        .f("upsilon", r.upsilon)
        .f("energy", r.energy)
        .f("false_alarm_prob", r.false_alarm_prob)
        .f("union_bound", r.union_bound)
        .f("exact_error", r.exact_error)
        .f("mc_error_rate", r.mc_error_rate)
        .f("ci_low", r.ci_low)
        .f("ci_high", r.ci_high)
        .v("trials_run", r.trials_run)
        .v("errors", r.errors)
        .build();
    emit_json(&path, &body, &manifest)?;
    Ok(vec![path])
}

pub fn cmd_spectral(a: &SpectralArgs, out_dir: &Path, pool: &ThreadPool) -> Result<Vec<PathBuf>, Failure> {
    let sigma = sigma_arg(a.sigma)?;
    let lo = power_arg("--p-min", a.p_min)?.get();
    let hi = power_arg("--p-max", a.p_max)?.get();
    if !(hi > lo) || a.per_decade == 0 {
        return Err(Failure::usage("bad power grid: need p-max > p-min and per-decade > 0".into()));
    }
    let n = ((hi / lo).log10() * a.per_decade as f64).round() as usize + 1;
    let powers: Vec<PowerBudget> = grid(lo, hi, n.max(2), Spacing::Log, "power")?
        .into_iter()
        .map(|p| PowerBudget::new(p * sigma.variance()).expect("positive power"))
        .collect();
    let (mode, name) = match a.mode {
        SpectralModeArg::Gaussian => (SpectralMode::Gaussian, "gaussian"),
        SpectralModeArg::Sym => (SpectralMode::Sym, "sym"),
        SpectralModeArg::Opt => (SpectralMode::Opt, "opt"),
    };
    let curve = if mode == SpectralMode::Opt {
        let results: Vec<CapacityResult> = pool.install(|| {
            powers.par_iter().map(|&p| onebit_core::capacity::solve_capacity_avg(p, sigma)).collect()
        });
        opt_curve_from(&powers, &results, sigma)
    } else {
        spectral_curve(&powers, sigma, mode)
    }
    .map_err(|e| Failure::numeric(format!("spectral curve failed: {e}")))?;
    let manifest = RunManifest {
        subcommand: "spectral",
        parameters: Obj::new()
            .v("mode", name)
            .f("sigma", sigma.get())
            .f("p_min_sigma2", lo)
            .f("p_max_sigma2", hi)
            .v("per_decade", a.per_decade)
            .build(),
        seed: None,
        threads: pool.current_num_threads(),
    };
    let csv_path = out_dir.join(format!("spectral_{name}.csv"));
    let rows: Vec<Vec<String>> = curve
        .points
        .iter()
        .map(|p| vec![fmt_f64(p.eb_no_db), fmt_f64(p.efficiency_bps_hz), fmt_f64(p.power)])
        .collect();
    emit_csv(&csv_path, &["eb_no_db", "efficiency_bps_hz", "power"], &rows, &manifest)?;
    let side_path = out_dir.join(format!("spectral_{name}.json"));
    let side = Obj::new()
        .v("mode", name)
        .f("ebno_min_db", ebno_min(mode, sigma))
        .f("wideband_slope_bps_hz_per_3db", wideband_slope(mode))
        .v("points", curve.points.len())
        .v("truncated_below_power", curve.truncated_below.map_or(serde_json::Value::Null, num))
        .v("csv", csv_path.file_name().unwrap().to_string_lossy().into_owned())
        .build();
    emit_json(&side_path, &side, &manifest)?;
    let files = vec![csv_path, side_path];
    if let Some(p) = curve.truncated_below {
        return Err(Failure::caveat(
            format!("optimal curve truncated at and below P = {p:e}: solver gap above limit"),
            files,
        ));
    }
    Ok(files)
}
