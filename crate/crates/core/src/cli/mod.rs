//! Config-driven command-line front end.

pub mod config;
pub mod output;
pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::{
    compare_nondegenerate, default_delta_grid, delta_grid, fano_scan_with, trapping_delta,
    trapping_residual,
};
use crate::dynamics::{eigenvalues, evolve, Init, Method, Model, TimeGrid};
use crate::error::{LicsError, Result};

pub use config::{parse_config, parse_config_with, render_config, Command, Overrides, RunConfig};
pub use output::{write_csv, Series};
pub use svg::render_svg;

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// One-line human summary.
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn svg_path(csv: &Path) -> PathBuf {
    csv.with_extension("svg")
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}{ext}"))
}

fn time_grid(c: &RunConfig) -> Result<TimeGrid> {
    TimeGrid::new(
        c.t_start,
        c.t_end.expect("validated by the parser"),
        c.n_samples.expect("validated by the parser"),
    )
}

fn scan_grid(c: &RunConfig) -> Result<Vec<f64>> {
    match c.scan {
        Some(w) => delta_grid(w.min, w.max, w.steps),
        None => Ok(default_delta_grid(&c.params)),
    }
}

fn emit(c: &RunConfig, data: Series<'_>, path: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    write_csv(data, path)?;
    files.push(path.to_path_buf());
    if c.plot {
        let svg = svg_path(path);
        render_svg(data, &svg)?;
        files.push(svg);
    }
    Ok(())
}

/// Executes one configured command and writes its outputs.
pub fn run(c: &RunConfig) -> Result<RunOutcome> {
    c.params.validate()?;
    let p = &c.params;
    let mut files = Vec::new();
    let summary = match c.command {
        Command::Evolve => {
            let grid = time_grid(c)?;
            let traj = evolve(p, c.model, &c.init, &grid, Method::Expm)?;
            emit(
                c,
                Series::Trajectory(&traj),
                c.out.as_ref().unwrap(),
                &mut files,
            )?;
            format!(
                "evolve {} from {}: delta = {:.6}, final ionization = {:.7} at t = {}",
                c.model,
                c.init,
                p.delta,
                traj.final_ionization(),
                grid.t_end
            )
        }
        Command::Fano => {
            let deltas = scan_grid(c)?;
            let t_obs = c.t_obs.unwrap();
            let profile = fano_scan_with(p, &deltas, t_obs, &c.init, c.model, Method::Expm)?;
            emit(
                c,
                Series::Profile(&profile),
                c.out.as_ref().unwrap(),
                &mut files,
            )?;
            format!(
                "fano {} from {} at t = {}: min ionization = {:.7} at delta = {:.6}, max ionization = {:.7}, trapping delta = {:.6}",
                c.model,
                c.init,
                t_obs,
                profile.min_ionization(),
                profile.min_delta(),
                profile.max_ionization(),
                trapping_delta(p)
            )
        }
        Command::Trap => {
            let trap = trapping_delta(p);
            let residual = trapping_residual(p, trap)?;
            if let Some(out) = &c.out {
                let text = format!(
                    "trap_delta,residual\n{},{}\n",
                    output::fmt_f64(trap),
                    output::fmt_f64(residual)
                );
                output::write_file(out, &text)?;
                files.push(out.clone());
            }
            format!("trapping delta = {trap:.6} (residual min|Im λ| = {residual:.3e})")
        }
        Command::Eigen => {
            let h = c.model.hamiltonian(p)?;
            let values = eigenvalues(&h)?;
            if let Some(out) = &c.out {
                let mut text = String::from("index,re,im\n");
                for (k, l) in values.iter().enumerate() {
                    let _ = writeln!(
                        text,
                        "{k},{},{}",
                        output::fmt_f64(l.re),
                        output::fmt_f64(l.im)
                    );
                }
                output::write_file(out, &text)?;
                files.push(out.clone());
            }
            let list: Vec<String> = values
                .iter()
                .map(|l| format!("{:.6}{:+.6}i", l.re, l.im))
                .collect();
            format!(
                "eigenvalues of {} at delta = {:.6}: {}",
                c.model,
                p.delta,
                list.join(", ")
            )
        }
        Command::Nondeg => {
            let grid = time_grid(c)?;
            let deltas = scan_grid(c)?;
            let method = Method::Rk45 { tol: c.tol };
            let entry = compare_nondegenerate(p, &grid, &deltas, method)?;
            let out = c.out.as_ref().unwrap();
            let nd = evolve(p, Model::Nondegenerate4, &Init::G1, &grid, method)?;
            emit(c, Series::Trajectory(&nd), out, &mut files)?;
            let deg = evolve(
                &p.with_shifts(0.0, 0.0),
                Model::FourState,
                &Init::G1,
                &grid,
                method,
            )?;
            emit(
                c,
                Series::Trajectory(&deg),
                &sibling(out, ".degenerate"),
                &mut files,
            )?;
            let last = entry.ionization.last().unwrap();
            format!(
                "nondeg shifts ({}, {}): final ionization {:.7} vs degenerate {:.7}, sup amplitude diff = {:.3e}, Fano minima {:.4} vs {:.4} (degenerate width {:.4})",
                entry.shift_g,
                entry.shift_e,
                last.2,
                last.1,
                entry.sup_amplitude_diff,
                entry.nondegenerate_profile_min,
                entry.degenerate_profile_min,
                entry.degenerate_profile_width
            )
        }
    };
    Ok(RunOutcome { summary, files })
}

/// Reads, parses and runs a config file.
pub fn run_file(path: &Path, overrides: &Overrides) -> Result<RunOutcome> {
    let text = std::fs::read_to_string(path).map_err(|e| LicsError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let config = parse_config_with(&text, overrides)?;
    run(&config)
}
