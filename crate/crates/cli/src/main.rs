//! Command-line front end: solve, mass-match, reconstruct, order estimation
//! and classical comparison, with reproducible CSV/JSON output.
//!
//! Exit codes: 0 success, 1 validation problem, 2 numerical failure, 3 I/O.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use barenblatt::{
    classical, mass_match, order, profile, reconstruct, Error, FractionalParams, SpaceTimeSolution,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "barenblatt",
    version,
    about = "Self-similar solutions of the time-fractional porous medium equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the profile on [-z0, 0] at a fixed support half-width
    Solve {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        z0: f64,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Emit the even reflection onto (0, z0] as well
        #[arg(long)]
        reflected: bool,
    },
    /// Find the support half-width z0* matching unit total mass
    MassMatch {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: f64,
        #[arg(long = "z0-init", default_value_t = 1.0)]
        z0_init: f64,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        reflected: bool,
    },
    /// Evaluate u(x, t) at a list of times (mass-matched unless --z0 given)
    Reconstruct {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: f64,
        /// Fixed support half-width; skips mass matching
        #[arg(long)]
        z0: Option<f64>,
        #[arg(long = "z0-init", default_value_t = 1.0)]
        z0_init: f64,
        /// Comma-separated list of positive times
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Estimate the empirical convergence order by grid halving
    Order {
        #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
        alpha: Option<f64>,
        #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
        m: Option<f64>,
        /// Run the full 5x5 parameter grid instead of a single pair
        #[arg(long)]
        grid: bool,
        /// Fixed support half-width; defaults to the mass-matched value
        #[arg(long)]
        z0: Option<f64>,
        #[arg(long = "base-steps", default_value_t = 2048)]
        base_steps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the fractional solution at alpha = 0.999 with the classical closed form
    ClassicalCompare {
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

fn report_numerical(e: &Error) -> u8 {
    eprintln!("error: {}", e);
    if let Error::BracketNotFound { history, .. } = e {
        eprintln!("bracket history (z0, residual):");
        for (z0, f) in history {
            eprintln!("  {:.16e}  {:.16e}", z0, f);
        }
    }
    match e {
        Error::Domain(_) | Error::GridMismatch(_) => 1,
        Error::Convergence { .. }
        | Error::QuadratureTolerance { .. }
        | Error::BracketNotFound { .. }
        | Error::TrivialProfile(_)
        | Error::NegativeWeightSum { .. } => 2,
    }
}

fn validate_tol(tol: f64) -> Result<(), u8> {
    if !tol.is_finite() || tol <= 0.0 {
        eprintln!("error: tolerance must be positive, got {}", tol);
        return Err(1);
    }
    Ok(())
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), u8> {
    let result = match path {
        Some(p) => std::fs::write(p, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    };
    result.map_err(|e| {
        eprintln!("i/o error: {}", e);
        3
    })
}

fn run(command: Command) -> Result<(), u8> {
    match command {
        Command::Solve {
            alpha,
            m,
            z0,
            steps,
            tol,
            out,
            format,
            reflected,
        } => {
            validate_tol(tol)?;
            let params = FractionalParams::new(alpha, m).map_err(|e| report_numerical(&e))?;
            let prof =
                profile::solve_profile(&params, z0, steps).map_err(|e| report_numerical(&e))?;
            let sol = SpaceTimeSolution::new(params, prof);
            let content = match format {
                Format::Csv => reconstruct::export_profile_csv(&sol, tol, reflected),
                Format::Json => reconstruct::export_profile_json(&sol, tol, reflected),
            };
            write_output(out.as_ref(), &content)
        }
        Command::MassMatch {
            alpha,
            m,
            z0_init,
            steps,
            tol,
            out,
            format,
            reflected,
        } => {
            let params = FractionalParams::new(alpha, m).map_err(|e| report_numerical(&e))?;
            let matched = mass_match::find_support(&params, steps, tol, z0_init)
                .map_err(|e| report_numerical(&e))?;
            let summary = format!(
                "# z0_star = {:.16e}\n# residual = {:.16e}\n# iterations = {}\n",
                matched.z0_star, matched.residual, matched.iterations
            );
            let sol = SpaceTimeSolution::new(params, matched.profile);
            let content = match format {
                Format::Csv => reconstruct::export_profile_csv(&sol, tol, reflected),
                Format::Json => reconstruct::export_profile_json(&sol, tol, reflected),
            };
            if out.is_some() {
                write_output(out.as_ref(), &content)?;
                print!("{}", summary);
                Ok(())
            } else {
                write_output(None, &format!("{}{}", summary, content))
            }
        }
        Command::Reconstruct {
            alpha,
            m,
            z0,
            z0_init,
            times,
            steps,
            tol,
            out,
            format,
        } => {
            let params = FractionalParams::new(alpha, m).map_err(|e| report_numerical(&e))?;
            let prof = match z0 {
                Some(z0) => {
                    validate_tol(tol)?;
                    profile::solve_profile(&params, z0, steps).map_err(|e| report_numerical(&e))?
                }
                None => {
                    mass_match::find_support(&params, steps, tol, z0_init)
                        .map_err(|e| report_numerical(&e))?
                        .profile
                }
            };
            let sol = SpaceTimeSolution::new(params, prof);
            let content = match format {
                Format::Csv => reconstruct::export_solution_csv(&sol, &times, tol),
                Format::Json => reconstruct::export_solution_json(&sol, &times, tol),
            }
            .map_err(|e| report_numerical(&e))?;
            write_output(out.as_ref(), &content)
        }
        Command::Order {
            alpha,
            m,
            grid,
            z0,
            base_steps,
            tol,
            out,
            format,
        } => {
            validate_tol(tol)?;
            let cells: Vec<(f64, f64)> = if grid {
                let alphas = [0.999, 0.9, 0.5, 0.2, 0.01];
                let ms = [1.0, 3.0, 5.0, 7.0, 9.0];
                alphas
                    .iter()
                    .flat_map(|a| ms.iter().map(move |m| (*a, *m)))
                    .collect()
            } else {
                vec![(alpha.unwrap(), m.unwrap())]
            };
            let mut reports = Vec::new();
            for (a, mm) in cells {
                let params = FractionalParams::new(a, mm).map_err(|e| report_numerical(&e))?;
                let z0_cell = match z0 {
                    Some(v) => v,
                    None => {
                        mass_match::find_support(&params, base_steps, tol, 1.0)
                            .map_err(|e| report_numerical(&e))?
                            .z0_star
                    }
                };
                let report = order::estimate_order(&params, z0_cell, base_steps)
                    .map_err(|e| report_numerical(&e))?;
                reports.push(report);
            }
            let content = match format {
                Format::Csv => {
                    let mut s = format!(
                        "# barenblatt order\n# version = {}\n# tol = {:.16e}\n",
                        env!("CARGO_PKG_VERSION"),
                        tol
                    );
                    s.push_str("alpha,m,base_steps,z0,diff_coarse,diff_fine,p\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                            r.params.alpha(),
                            r.params.m(),
                            r.base_n,
                            r.z0,
                            r.diff_coarse,
                            r.diff_fine,
                            r.p_estimate
                        ));
                    }
                    s
                }
                Format::Json => {
                    let value = serde_json::json!({
                        "kind": "order",
                        "version": env!("CARGO_PKG_VERSION"),
                        "tol": tol,
                        "alpha": reports.iter().map(|r| r.params.alpha()).collect::<Vec<_>>(),
                        "m": reports.iter().map(|r| r.params.m()).collect::<Vec<_>>(),
                        "base_steps": reports.iter().map(|r| r.base_n).collect::<Vec<_>>(),
                        "z0": reports.iter().map(|r| r.z0).collect::<Vec<_>>(),
                        "diff_coarse": reports.iter().map(|r| r.diff_coarse).collect::<Vec<_>>(),
                        "diff_fine": reports.iter().map(|r| r.diff_fine).collect::<Vec<_>>(),
                        "p": reports.iter().map(|r| r.p_estimate).collect::<Vec<_>>(),
                    });
                    let mut s = value.to_string();
                    s.push('\n');
                    s
                }
            };
            write_output(out.as_ref(), &content)
        }
        Command::ClassicalCompare {
            m,
            steps,
            tol,
            out,
            format,
        } => {
            let params = FractionalParams::new(0.999, m).map_err(|e| report_numerical(&e))?;
            let matched = mass_match::find_support(&params, steps, tol, 1.0)
                .map_err(|e| report_numerical(&e))?;
            let z0_classical = classical::classical_support(m).map_err(|e| report_numerical(&e))?;
            let grid = *matched.profile.grid();
            let mut max_err = 0.0f64;
            for i in 0..=grid.n_steps() {
                let reference = classical::classical_profile(m, grid.node(i))
                    .map_err(|e| report_numerical(&e))?;
                max_err = max_err.max((matched.profile.value(i) - reference).abs());
            }
            let content = match format {
                Format::Csv => format!(
                    "# barenblatt classical-compare\n# version = {}\n# alpha = 9.99e-1 (classical limit)\n# n_steps = {}\n# tol = {:.16e}\nm,z0_numerical,z0_classical,max_abs_error\n{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    env!("CARGO_PKG_VERSION"),
                    steps,
                    tol,
                    m,
                    matched.z0_star,
                    z0_classical,
                    max_err
                ),
                Format::Json => {
                    let value = serde_json::json!({
                        "kind": "classical-compare",
                        "version": env!("CARGO_PKG_VERSION"),
                        "alpha": 0.999,
                        "n_steps": steps,
                        "tol": tol,
                        "m": m,
                        "z0_numerical": matched.z0_star,
                        "z0_classical": z0_classical,
                        "max_abs_error": max_err,
                    });
                    let mut s = value.to_string();
                    s.push('\n');
                    s
                }
            };
            write_output(out.as_ref(), &content)
        }
    }
}
