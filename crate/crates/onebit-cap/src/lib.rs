//! Command-line front end for `onebit-core`.
//!
//! Every subcommand writes its result into `--out-dir` together with a
//! `<file>.manifest.json` recording the parameters, tool version, seed and
//! a UTC timestamp. Exit codes: 0 success, 2 usage, 3 result written with
//! a caveat, 4 failed verification.

pub mod args;
pub mod commands;
pub mod output;
pub mod verify;

use std::path::PathBuf;

pub use args::Cli;
use args::{Command, Suite};
use output::{Obj, RunManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAVEAT: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

/// A run that did not end cleanly.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Files written before the run stopped.
    pub written: Vec<PathBuf>,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Self { code: EXIT_USAGE, message, written: Vec::new() }
    }

    pub fn caveat(message: impl Into<String>, written: Vec<PathBuf>) -> Self {
        Self { code: EXIT_CAVEAT, message: message.into(), written }
    }

    /// Numerical failure inside the library.
    pub fn numeric(message: String) -> Self {
        Self { code: EXIT_CAVEAT, message, written: Vec::new() }
    }

    pub fn io(message: String) -> Self {
        Self { code: EXIT_USAGE, message, written: Vec::new() }
    }
}

fn cmd_verify(suite: Suite, out_dir: &std::path::Path, threads: usize) -> Result<Vec<PathBuf>, Failure> {
    let checks = verify::run_suite(suite);
    let name = match suite {
        Suite::Specfun => "specfun",
        Suite::Inequalities => "inequalities",
        Suite::Limits => "limits",
        Suite::All => "all",
    };
    let list: Vec<serde_json::Value> = checks
        .iter()
        .map(|c| Obj::new().v("suite", c.suite).v("name", c.name).v("passed", c.passed).v("detail", c.detail.clone()).build())
        .collect();
    let all_passed = checks.iter().all(|c| c.passed);
    let body = Obj::new().v("suite", name).v("passed", all_passed).v("checks", list).build();
    let path = out_dir.join(format!("verify_{name}.json"));
    let manifest =
        RunManifest { subcommand: "verify", parameters: Obj::new().v("suite", name).build(), seed: None, threads };
    output::write_json(&path, &body).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    output::write_manifest(&path, &manifest).map_err(|e| Failure::io(format!("cannot write manifest: {e}")))?;
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Failure { code: EXIT_VERIFY, message: format!("check {}/{} failed: {}", c.suite, c.name, c.detail), written: vec![path] });
    }
    Ok(vec![path])
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> u8 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    match cli.common.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        Some(n) => builder = builder.num_threads(n),
        None => {}
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let dir = &cli.common.out_dir;
    let result = match &cli.command {
        Command::Capacity(a) => commands::cmd_capacity(a, dir, &pool),
        Command::Cue(a) => commands::cmd_cue(a, dir, &pool),
        Command::Ppm(a) => commands::cmd_ppm(a, dir, &pool),
        Command::Spectral(a) => commands::cmd_spectral(a, dir, &pool),
        Command::Verify(a) => cmd_verify(a.suite, dir, pool.current_num_threads()),
    };
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            EXIT_OK
        }
        Err(f) => {
            for w in &f.written {
                println!("{}", w.display());
            }
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
