//! Running a single sweep cell and the CSV row it produces.

use std::time::Instant;

use serde::Serialize;

use iso_core::{
    conjectured_optimum, min_error_discriminate, orthogonal_regime_state, run_method,
    two_sensor_optimum, unambiguous_discriminate, Ensemble, Error as CoreError, SensorUnitary,
    StateVector,
};

use crate::spec::{config_hash, Cell, CliMethod, Measurement, SweepSpec};

/// What went wrong in a failed cell: drives the sweep exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Validation,
    NonConvergence,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRow {
    pub n: usize,
    pub theta_deg: f64,
    pub method: &'static str,
    pub measurement: &'static str,
    pub seed: u64,
    pub p_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub config_hash: String,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub failure: Option<FailureKind>,
}

struct CellOutcome {
    p_value: f64,
    iterations: usize,
    converged: bool,
}

pub fn run_cell(spec: &SweepSpec, cell: &Cell) -> CellRow {
    let start = Instant::now();
    let outcome = execute(spec, cell);
    let (p_value, iterations, converged, error, failure) = match outcome {
        Ok(o) => {
            let failure = if o.converged {
                None
            } else {
                Some(FailureKind::NonConvergence)
            };
            (o.p_value, o.iterations, o.converged, None, failure)
        }
        Err(e) => {
            let kind = match e {
                CoreError::SolverNotConverged { .. } => FailureKind::NonConvergence,
                _ => FailureKind::Validation,
            };
            (f64::NAN, 0, false, Some(e.to_string()), Some(kind))
        }
    };
    CellRow {
        n: cell.n,
        theta_deg: cell.theta_deg,
        method: cell.method.name(),
        measurement: spec.measurement.name(),
        seed: cell.seed,
        p_value,
        iterations,
        converged,
        config_hash: config_hash(spec, cell),
        wall_time_s: start.elapsed().as_secs_f64(),
        error,
        failure,
    }
}

fn execute(spec: &SweepSpec, cell: &Cell) -> Result<CellOutcome, CoreError> {
    let u = SensorUnitary::new(cell.theta_deg)?;
    match cell.method {
        CliMethod::Hc | CliMethod::Sa | CliMethod::Ga => {
            let method = cell.method.heuristic().expect("heuristic arm");
            let cfg = spec.search.clone().with_seed(cell.seed);
            let record = run_method(
                method,
                &u,
                cell.n,
                &cfg,
                spec.measurement.objective(),
            )?;
            Ok(CellOutcome {
                p_value: record.final_p_error,
                iterations: record.iterations,
                converged: true,
            })
        }
        CliMethod::Conjecture => {
            let state = match conjectured_optimum(cell.n, cell.theta_deg) {
                Ok(sol) => sol.state,
                // Inside the orthogonal band the conjecture hands over to the
                // zero-error construction (they coincide at θ = T).
                Err(CoreError::InsideOrthogonalRegime { .. }) => {
                    if cell.n == 2 {
                        two_sensor_optimum(cell.theta_deg)?.state
                    } else {
                        orthogonal_regime_state(cell.n, cell.theta_deg)?.state
                    }
                }
                Err(e) => return Err(e),
            };
            score_state(spec, &u, &state)
        }
        CliMethod::Corollary => {
            let sol = orthogonal_regime_state(cell.n, cell.theta_deg)?;
            score_state(spec, &u, &sol.state)
        }
        CliMethod::TwoSensor => {
            if cell.n != 2 {
                return Err(CoreError::DomainError(format!(
                    "two_sensor method requires n = 2, got {}",
                    cell.n
                )));
            }
            let sol = two_sensor_optimum(cell.theta_deg)?;
            score_state(spec, &u, &sol.state)
        }
    }
}

/// Scores a constructed state through the requested measurement solver.
fn score_state(
    spec: &SweepSpec,
    u: &SensorUnitary,
    state: &StateVector,
) -> Result<CellOutcome, CoreError> {
    let ensemble: Ensemble = state.final_states(u)?;
    match spec.measurement {
        Measurement::MinError => {
            let res = min_error_discriminate(&ensemble, spec.solver_tol)?;
            Ok(CellOutcome {
                p_value: res.p_error,
                iterations: res.iterations,
                converged: res.converged,
            })
        }
        Measurement::Unambiguous => {
            let res = unambiguous_discriminate(&ensemble, spec.solver_tol)?;
            Ok(CellOutcome {
                p_value: res.p_failure,
                iterations: 0,
                converged: res.converged,
            })
        }
    }
}
