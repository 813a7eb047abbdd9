//! The non-sweep commands: `thresholds`, `solve`, `validate-conjecture`,
//! `validate-averaging`, and `symmetry-trace`.

use std::fs;
use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use iso_core::{
    average_state, conjectured_optimum, gram_matrix, hill_climb, min_error_discriminate,
    objective_p, permute_state, run_method, threshold_deg, unambiguous_discriminate, Method,
    ObjectiveKind, SearchConfig, SensorPermutation, SensorUnitary, StateVector,
};

use crate::errors::{CliError, CliResult, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VALIDATION};
use crate::spec::{inside_orthogonal_band, Measurement};

pub fn cmd_thresholds(max_n: usize) -> CliResult<i32> {
    if !(3..=12).contains(&max_n) {
        return Err(CliError::Validation(format!(
            "--max-n must lie in [3, 12], got {max_n}"
        )));
    }
    println!("{:>3}  {:>8}  orthogonal band", "n", "T_deg");
    for n in 3..=max_n {
        let t = threshold_deg(n).map_err(CliError::from)?;
        println!("{n:>3}  {t:>8.3}  [{t:.3}, {:.3}]", 180.0 - t);
    }
    Ok(EXIT_OK)
}

pub struct SolveArgs {
    pub state: PathBuf,
    pub theta: f64,
    pub measurement: Measurement,
    pub tol: f64,
    pub dump: Option<PathBuf>,
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<i32> {
    let text = fs::read_to_string(&args.state)?;
    let psi: StateVector = serde_json::from_str(&text)?;
    let u = SensorUnitary::new(args.theta).map_err(CliError::from)?;
    let ensemble = psi.final_states(&u).map_err(CliError::from)?;
    let gram = gram_matrix(&ensemble);

    println!(
        "state: n = {}, dim = {}, theta = {} deg, measurement = {}",
        psi.n_sensors(),
        psi.dim(),
        args.theta,
        args.measurement.name()
    );
    println!("gram matrix of the final states:");
    print_matrix(&gram);

    let mut dump = json!({
        "n": psi.n_sensors(),
        "theta_deg": args.theta,
        "measurement": args.measurement.name(),
        "gram": matrix_json(&gram),
    });

    let code = match args.measurement {
        Measurement::MinError => {
            let res = min_error_discriminate(&ensemble, args.tol).map_err(CliError::from)?;
            println!("p_error              = {:.9}", res.p_error);
            println!("certificate_residual = {:.3e}", res.certificate_residual);
            println!("iterations           = {}", res.iterations);
            println!("converged            = {}", res.converged);
            dump["p_error"] = json!(res.p_error);
            dump["certificate_residual"] = json!(res.certificate_residual);
            dump["iterations"] = json!(res.iterations);
            dump["converged"] = json!(res.converged);
            dump["residual_trace"] = json!(res.residual_trace);
            dump["povm"] = json!(res
                .povm
                .elements()
                .iter()
                .map(matrix_json)
                .collect::<Vec<_>>());
            if res.converged {
                EXIT_OK
            } else {
                EXIT_NONCONVERGENCE
            }
        }
        Measurement::Unambiguous => {
            let res = unambiguous_discriminate(&ensemble, args.tol).map_err(CliError::from)?;
            println!("p_failure = {:.9}", res.p_failure);
            println!("converged = {}", res.converged);
            dump["p_failure"] = json!(res.p_failure);
            dump["converged"] = json!(res.converged);
            dump["povm"] = json!(res
                .povm
                .elements()
                .iter()
                .map(matrix_json)
                .collect::<Vec<_>>());
            if res.converged {
                EXIT_OK
            } else {
                EXIT_NONCONVERGENCE
            }
        }
    };

    if let Some(path) = &args.dump {
        fs::write(path, serde_json::to_string_pretty(&dump).expect("dump") + "\n")?;
        println!("debug dump written to {}", path.display());
    }
    Ok(code)
}

pub struct ValidateConjectureArgs {
    pub n: usize,
    pub thetas: Option<Vec<f64>>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// Compares the hill-climbing heuristic against the conjectured optimum on a
/// θ grid below threshold; flags any θ where the heuristic wins by more than
/// the solver-noise margin.
pub fn cmd_validate_conjecture(args: &ValidateConjectureArgs) -> CliResult<i32> {
    const MARGIN: f64 = 1e-4;
    let t = if args.n == 2 {
        45.0
    } else {
        threshold_deg(args.n).map_err(CliError::from)?
    };
    let thetas = match &args.thetas {
        Some(list) => list.clone(),
        None => (1..=8).map(|k| t * k as f64 / 9.0).collect(),
    };
    for &theta in &thetas {
        if !(theta > 0.0 && theta < 180.0) {
            return Err(CliError::Validation(format!(
                "theta {theta} outside (0, 180)"
            )));
        }
        if inside_orthogonal_band(args.n, theta) {
            return Err(CliError::Validation(format!(
                "theta {theta} lies inside the orthogonal regime [{t:.3}, {:.3}]; \
                 the conjecture applies outside it",
                180.0 - t
            )));
        }
    }

    let u_cfg = SearchConfig::default().with_seed(args.seed);
    println!(
        "{:>10}  {:>12}  {:>12}  {:>11}  flag",
        "theta_deg", "hc_p", "conjecture_p", "hc-conj"
    );
    let mut flagged = Vec::new();
    let mut rows = Vec::new();
    for &theta in &thetas {
        let predicted = conjectured_optimum(args.n, theta)
            .map_err(CliError::from)?
            .predicted_error;
        let u = SensorUnitary::new(theta).map_err(CliError::from)?;
        let record = hill_climb(&u, args.n, &u_cfg).map_err(CliError::from)?;
        let diff = record.final_p_error - predicted;
        let flag = diff < -MARGIN;
        if flag {
            flagged.push(theta);
        }
        println!(
            "{theta:>10.4}  {:>12.8}  {predicted:>12.8}  {diff:>11.2e}  {}",
            record.final_p_error,
            if flag { "BEATS-CONJECTURE" } else { "ok" }
        );
        rows.push(json!({
            "theta_deg": theta,
            "hc_p": record.final_p_error,
            "conjecture_p": predicted,
            "difference": diff,
            "flagged": flag,
        }));
    }
    if let Some(path) = &args.out {
        let report = json!({
            "n": args.n,
            "seed": args.seed,
            "margin": MARGIN,
            "rows": rows,
            "flagged_thetas": flagged,
        });
        fs::write(path, serde_json::to_string_pretty(&report).expect("report") + "\n")?;
    }
    if flagged.is_empty() {
        println!("conjecture holds on all {} grid points", thetas.len());
        Ok(EXIT_OK)
    } else {
        println!("conjecture violated at {} grid points", flagged.len());
        Ok(EXIT_VALIDATION)
    }
}

pub struct ValidateAveragingArgs {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub theta: f64,
    pub out: Option<PathBuf>,
}

/// Checks, per random state: all sensor renumberings keep the objective
/// unchanged, and averaging with any renumbered copy never raises it.
pub fn cmd_validate_averaging(args: &ValidateAveragingArgs) -> CliResult<i32> {
    if !(2..=5).contains(&args.n) {
        return Err(CliError::Validation(format!(
            "averaging validation supports n in [2, 5], got {}",
            args.n
        )));
    }
    let equivalence_tol = 2.0 * iso_core::tolerances::SOLVER_TOL;
    const AVERAGING_SLACK: f64 = 1e-6;
    let u = SensorUnitary::new(args.theta).map_err(CliError::from)?;
    let permutations: Vec<SensorPermutation> = SensorPermutation::enumerate(args.n)
        .map_err(CliError::from)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut violations = 0usize;
    let mut rows = Vec::new();

    println!(
        "{:>5}  {:>12}  {:>12}  {:>12}  {:>12}",
        "trial", "original_p", "avg_min", "avg_max", "equiv_dev"
    );
    for trial in 0..args.trials {
        let psi = StateVector::random(args.n, &mut rng).map_err(CliError::from)?;
        let p_original = objective_p(&psi, &u).map_err(CliError::from)?;
        let mut equiv_dev = 0.0f64;
        let mut avg_min = f64::INFINITY;
        let mut avg_max = f64::NEG_INFINITY;
        let mut trial_violations = Vec::new();
        for perm in &permutations {
            let permuted = permute_state(&psi, perm).map_err(CliError::from)?;
            let p_perm = objective_p(&permuted, &u).map_err(CliError::from)?;
            let dev = (p_perm - p_original).abs();
            equiv_dev = equiv_dev.max(dev);
            if dev > equivalence_tol {
                trial_violations.push(format!(
                    "renumbering {:?} shifted P by {dev:.3e}",
                    perm.pi()
                ));
            }
            let averaged = average_state(&psi, &permuted).map_err(CliError::from)?;
            let p_avg = objective_p(&averaged, &u).map_err(CliError::from)?;
            avg_min = avg_min.min(p_avg);
            avg_max = avg_max.max(p_avg);
            if p_avg > p_original + AVERAGING_SLACK {
                trial_violations.push(format!(
                    "averaging with {:?} raised P from {p_original:.8} to {p_avg:.8}",
                    perm.pi()
                ));
            }
        }
        println!(
            "{trial:>5}  {p_original:>12.8}  {avg_min:>12.8}  {avg_max:>12.8}  {equiv_dev:>12.3e}"
        );
        for v in &trial_violations {
            println!("       violation: {v}");
        }
        violations += trial_violations.len();
        rows.push(json!({
            "trial": trial,
            "original_p": p_original,
            "averaged_min_p": avg_min,
            "averaged_max_p": avg_max,
            "equivalence_max_dev": equiv_dev,
            "violations": trial_violations,
        }));
    }
    if let Some(path) = &args.out {
        let report = json!({
            "n": args.n,
            "theta_deg": args.theta,
            "trials": args.trials,
            "seed": args.seed,
            "equivalence_tol": equivalence_tol,
            "averaging_slack": AVERAGING_SLACK,
            "violations": violations,
            "rows": rows,
        });
        fs::write(path, serde_json::to_string_pretty(&report).expect("report") + "\n")?;
    }
    if violations == 0 {
        println!("averaging property held in all {} trials", args.trials);
        Ok(EXIT_OK)
    } else {
        println!("averaging property violated {violations} times");
        Ok(EXIT_VALIDATION)
    }
}

pub struct SymmetryTraceArgs {
    pub n: usize,
    pub theta: f64,
    pub method: Method,
    pub seed: u64,
    pub out: PathBuf,
    pub scatter: Option<PathBuf>,
}

pub fn cmd_symmetry_trace(args: &SymmetryTraceArgs) -> CliResult<i32> {
    let u = SensorUnitary::new(args.theta).map_err(CliError::from)?;
    let cfg = SearchConfig::default().with_seed(args.seed);
    let record = run_method(args.method, &u, args.n, &cfg, ObjectiveKind::MinError)
        .map_err(CliError::from)?;

    let mut file = fs::File::create(&args.out)?;
    record.write_trajectory_csv(&mut file)?;
    if let Some(path) = &args.scatter {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["symmetry_index", "p_error"])?;
        for p in &record.trajectory {
            w.write_record([p.symmetry_index.to_string(), p.p_error.to_string()])?;
        }
        w.flush()?;
    }
    let last = record.trajectory.last().expect("non-empty trajectory");
    println!(
        "method = {}, n = {}, theta = {} deg, seed = {}",
        record.method.name(),
        args.n,
        args.theta,
        args.seed
    );
    println!("iterations           = {}", record.iterations);
    println!("final p_error        = {:.9}", record.final_p_error);
    println!("final symmetry_index = {:.9}", last.symmetry_index);
    println!("trajectory written to {}", args.out.display());
    Ok(EXIT_OK)
}

fn print_matrix(m: &DMatrix<Complex64>) {
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{:+.6}{:+.6}i", m[(r, c)].re, m[(r, c)].im))
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

fn matrix_json(m: &DMatrix<Complex64>) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect();
    json!(rows)
}
