use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use lics::cli::{run_file, Overrides};

/// Multilevel continuum-structure simulator.
#[derive(Debug, Parser)]
#[command(name = "lics", version)]
struct Args {
    /// Run configuration (`key = value` lines).
    config: PathBuf,

    /// Output path, overrides `out`.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write an SVG plot next to the CSV.
    #[arg(long)]
    plot: bool,

    /// Integrator tolerance, overrides `tol`.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        out: args.out,
        plot: args.plot,
        tol: args.tol,
    };
    match run_file(&args.config, &overrides) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lics: {e}");
            ExitCode::FAILURE
        }
    }
}
