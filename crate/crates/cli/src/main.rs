//! `iso` — initial-state optimization for quantum detector sensor networks.
//!
//! Subcommands: `thresholds`, `solve`, `sweep`, `validate-conjecture`,
//! `validate-averaging`, `symmetry-trace`. Exit codes: 0 success,
//! 1 validation failure, 2 solver non-convergence, 3 I/O error.

mod cells;
mod commands;
mod errors;
mod spec;
mod svg;
mod sweep;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{
    cmd_solve, cmd_symmetry_trace, cmd_thresholds, cmd_validate_averaging,
    cmd_validate_conjecture, SolveArgs, SymmetryTraceArgs, ValidateAveragingArgs,
    ValidateConjectureArgs,
};
use errors::{CliError, CliResult};
use spec::{CliMethod, Measurement, SweepSpec, ThetaGrid};

#[derive(Parser)]
#[command(
    name = "iso",
    version,
    about = "Initial-state optimization for quantum detector sensor networks"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the orthogonality threshold table T(n)
    Thresholds {
        /// Largest sensor count to tabulate
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Evaluate a state JSON file against the discrimination solvers
    Solve {
        /// Path to `{"n": ..., "amps": [[re, im], ...]}`
        #[arg(long)]
        state: PathBuf,
        /// Sensor-unitary angle in degrees, open interval (0, 180)
        #[arg(long)]
        theta: f64,
        #[arg(long, value_enum, default_value = "min-error")]
        measurement: Measurement,
        /// Certificate tolerance of the solver
        #[arg(long, default_value_t = iso_core::tolerances::SOLVER_TOL)]
        tol: f64,
        /// Write a JSON debug dump (Gram matrix, POVM, residual trace)
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run a (n, theta, method, seed) sweep and write CSV/JSON/SVG results
    Sweep {
        /// JSON config mirroring the sweep spec; flags override file values
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sensor counts, e.g. 2,3,4
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Theta grid: comma list `10,20,30` or range `start:stop:step`
        #[arg(long)]
        theta: Option<String>,
        /// Methods: hc,sa,ga,conjecture,corollary,two-sensor
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<CliMethod>>,
        #[arg(long, value_enum)]
        measurement: Option<Measurement>,
        /// Seeds, e.g. 1,2,3
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render per-n SVG charts from the CSV
        #[arg(long)]
        svg: bool,
        /// Certificate tolerance of the solver
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare hill climbing against the conjectured optimum below threshold
    ValidateConjecture {
        #[arg(long)]
        n: usize,
        /// Theta grid (comma list); default: 8 points below T
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<f64>>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write a JSON report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that averaging renumbered equivalents never raises the objective
    ValidateAveraging {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 67.5)]
        theta: f64,
        /// Write a JSON report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Record per-iteration (p_error, symmetry_index) of one heuristic run
    SymmetryTrace {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: f64,
        /// hc, sa or ga
        #[arg(long, value_enum, default_value = "hc")]
        method: CliMethod,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Trajectory CSV path
        #[arg(long)]
        out: PathBuf,
        /// Optional scatter CSV (symmetry_index, p_error)
        #[arg(long)]
        scatter: Option<PathBuf>,
    },
}

fn main() {
    let args = Args::parse();
    let code = match dispatch(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(args: Args) -> CliResult<i32> {
    match args.command {
        Command::Thresholds { max_n } => cmd_thresholds(max_n),
        Command::Solve {
            state,
            theta,
            measurement,
            tol,
            dump,
        } => cmd_solve(&SolveArgs {
            state,
            theta,
            measurement,
            tol,
            dump,
        }),
        Command::Sweep {
            config,
            n,
            theta,
            methods,
            measurement,
            seeds,
            out,
            svg,
            tol,
        } => {
            let mut spec = load_spec(config.as_deref())?;
            if let Some(n) = n {
                spec.n_values = n;
            }
            if let Some(theta) = theta {
                spec.theta_grid = parse_theta_grid(&theta)?;
            }
            if let Some(methods) = methods {
                spec.methods = methods;
            }
            if let Some(measurement) = measurement {
                spec.measurement = measurement;
            }
            if let Some(seeds) = seeds {
                spec.seeds = seeds;
            }
            if let Some(out) = out {
                spec.output_dir = out;
            }
            if svg {
                spec.svg = true;
            }
            if let Some(tol) = tol {
                spec.solver_tol = tol;
            }
            sweep::cmd_sweep(&spec)
        }
        Command::ValidateConjecture { n, theta, seed, out } => {
            cmd_validate_conjecture(&ValidateConjectureArgs {
                n,
                thetas: theta,
                seed,
                out,
            })
        }
        Command::ValidateAveraging {
            n,
            trials,
            seed,
            theta,
            out,
        } => cmd_validate_averaging(&ValidateAveragingArgs {
            n,
            trials,
            seed,
            theta,
            out,
        }),
        Command::SymmetryTrace {
            n,
            theta,
            method,
            seed,
            out,
            scatter,
        } => {
            let method = method.heuristic().ok_or_else(|| {
                CliError::Validation(format!(
                    "symmetry-trace requires a heuristic method, got {}",
                    method.name()
                ))
            })?;
            cmd_symmetry_trace(&SymmetryTraceArgs {
                n,
                theta,
                method,
                seed,
                out,
                scatter,
            })
        }
    }
}

fn load_spec(path: Option<&std::path::Path>) -> CliResult<SweepSpec> {
    match path {
        None => Ok(SweepSpec::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                if e.kind() == std::io::ErrorKind::NotFound {
                    CliError::Io(format!("config {} not found", p.display()))
                } else {
                    CliError::Io(e.to_string())
                }
            })?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

/// `10,20,30` or `start:stop:step`.
fn parse_theta_grid(text: &str) -> CliResult<ThetaGrid> {
    let parse = |s: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Validation(format!("bad theta value {s:?}")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Validation(format!(
                "theta range must be start:stop:step, got {text:?}"
            )));
        }
        Ok(ThetaGrid::Range {
            start: parse(parts[0])?,
            stop: parse(parts[1])?,
            step: parse(parts[2])?,
        })
    } else {
        let values = text
            .split(',')
            .map(parse)
            .collect::<CliResult<Vec<f64>>>()?;
        Ok(ThetaGrid::List(values))
    }
}
