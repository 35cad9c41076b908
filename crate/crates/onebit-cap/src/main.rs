use std::process::ExitCode;

use clap::Parser;
use onebit_cap::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
