//! Search heuristics over unit-norm complex state vectors.
//!
//! All three methods share the neighbor move of [`find_neighbor`]: perturb
//! one amplitude by a random unit phase times the step size, then
//! renormalize. Candidates are scored by the certified discrimination
//! objective; a candidate whose solve fails is discarded and counted in the
//! run record. Every run draws from a single seeded stream, so results are
//! reproducible from `(method, n, θ, config, seed)`.

mod annealing;
mod genetic;
mod hill_climb;

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{SensorUnitary, StateVector};
use crate::solver::{min_error_discriminate, unambiguous_discriminate};
use crate::symmetry::symmetry_index;
use crate::tolerances as tol;

/// Search heuristic selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Hc,
    Sa,
    Ga,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Hc => "hc",
            Method::Sa => "sa",
            Method::Ga => "ga",
        }
    }
}

/// Which measurement scheme scores a candidate state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Minimum-error probability (the ISO objective `P`).
    MinError,
    /// Failure probability of the optimal unambiguous measurement.
    UnambiguousFailure,
}

/// Tunables shared by the heuristics, with the defaults used throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub step_size_init: f64,
    pub step_decrease_rate: f64,
    pub cooling_rate: f64,
    pub neighbors_per_element: usize,
    pub min_iterations: usize,
    pub improvement_threshold: f64,
    pub sa_patience: usize,
    pub ga_population: usize,
    pub ga_mutation_rate: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            step_size_init: 0.1,
            step_decrease_rate: 0.96,
            cooling_rate: 0.96,
            neighbors_per_element: 4,
            min_iterations: 100,
            improvement_threshold: 1e-6,
            sa_patience: 5,
            ga_population: 40,
            ga_mutation_rate: 0.1,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| r > 0.0 && r < 1.0;
        if !rate_ok(self.step_decrease_rate) {
            return Err(Error::InvalidConfig(format!(
                "step_decrease_rate must lie in (0, 1), got {}",
                self.step_decrease_rate
            )));
        }
        if !rate_ok(self.cooling_rate) {
            return Err(Error::InvalidConfig(format!(
                "cooling_rate must lie in (0, 1), got {}",
                self.cooling_rate
            )));
        }
        if !(self.ga_mutation_rate > 0.0 && self.ga_mutation_rate < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ga_mutation_rate must lie in (0, 1), got {}",
                self.ga_mutation_rate
            )));
        }
        if !self.step_size_init.is_finite() || self.step_size_init <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step_size_init must be positive, got {}",
                self.step_size_init
            )));
        }
        if self.ga_population < 4 || !self.ga_population.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "ga_population must be even and at least 4, got {}",
                self.ga_population
            )));
        }
        if self.neighbors_per_element == 0 {
            return Err(Error::InvalidConfig(
                "neighbors_per_element must be at least 1".into(),
            ));
        }
        if !self.improvement_threshold.is_finite() || self.improvement_threshold < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "improvement_threshold must be non-negative, got {}",
                self.improvement_threshold
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One point of an optimization trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub p_error: f64,
    pub symmetry_index: f64,
}

/// One optimization run: the per-iteration trajectory and the final state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: Method,
    pub theta_deg: f64,
    pub n_sensors: usize,
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_state: StateVector,
    pub final_p_error: f64,
    pub wall_time_s: f64,
    pub seed: u64,
    /// Outer iterations (generations for GA) executed.
    pub iterations: usize,
    /// Candidates dropped because their objective solve failed.
    pub discarded: usize,
    pub config: SearchConfig,
}

impl RunRecord {
    /// Writes the trajectory as `iteration,p_error,symmetry_index` CSV.
    pub fn write_trajectory_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iteration,p_error,symmetry_index")?;
        for p in &self.trajectory {
            writeln!(w, "{},{},{}", p.iteration, p.p_error, p.symmetry_index)?;
        }
        Ok(())
    }
}

/// Perturbs amplitude `element` by a random unit phase times `step_size` and
/// renormalizes. With a fixed seed the output is reproducible.
pub fn find_neighbor<R: Rng + ?Sized>(
    x: &StateVector,
    element: usize,
    step_size: f64,
    rng: &mut R,
) -> StateVector {
    let mut amps = x.amps().to_vec();
    let angle = rng.random::<f64>() * std::f64::consts::TAU;
    amps[element] += Complex64::from_polar(step_size, angle);
    StateVector::renormalized(x.n_sensors(), amps)
}

/// Hill climbing over the `2^n`-dimensional unit sphere.
pub fn hill_climb(u: &SensorUnitary, n: usize, cfg: &SearchConfig) -> Result<RunRecord> {
    run_method(Method::Hc, u, n, cfg, ObjectiveKind::MinError)
}

/// Simulated annealing with the adaptive cooling schedule.
pub fn simulated_anneal(u: &SensorUnitary, n: usize, cfg: &SearchConfig) -> Result<RunRecord> {
    run_method(Method::Sa, u, n, cfg, ObjectiveKind::MinError)
}

/// Genetic algorithm with rank selection and two-point crossover.
pub fn genetic_search(u: &SensorUnitary, n: usize, cfg: &SearchConfig) -> Result<RunRecord> {
    run_method(Method::Ga, u, n, cfg, ObjectiveKind::MinError)
}

/// Runs the selected heuristic under the given objective.
pub fn run_method(
    method: Method,
    u: &SensorUnitary,
    n: usize,
    cfg: &SearchConfig,
    objective: ObjectiveKind,
) -> Result<RunRecord> {
    cfg.validate()?;
    if !(2..=tol::MAX_SENSORS).contains(&n) {
        return Err(Error::SensorCountOutOfRange(n));
    }
    let start = Instant::now();
    let mut ctx = RunContext {
        u,
        objective,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        discarded: 0,
    };
    let outcome = match method {
        Method::Hc => hill_climb::run(n, cfg, &mut ctx)?,
        Method::Sa => annealing::run(n, cfg, &mut ctx)?,
        Method::Ga => genetic::run(n, cfg, &mut ctx)?,
    };
    Ok(RunRecord {
        method,
        theta_deg: u.theta_deg(),
        n_sensors: n,
        iterations: outcome.iterations,
        trajectory: outcome.trajectory,
        final_state: outcome.final_state,
        final_p_error: outcome.final_p_error,
        wall_time_s: start.elapsed().as_secs_f64(),
        seed: cfg.seed,
        discarded: ctx.discarded,
        config: cfg.clone(),
    })
}

/// Shared run state: the scoring oracle and the seeded stream.
pub(crate) struct RunContext<'a> {
    u: &'a SensorUnitary,
    objective: ObjectiveKind,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) discarded: usize,
}

impl RunContext<'_> {
    /// Certified objective of a candidate; `Err` marks a discarded candidate.
    pub(crate) fn evaluate(&self, psi: &StateVector) -> Result<f64> {
        let ensemble = psi.final_states(self.u)?;
        match self.objective {
            ObjectiveKind::MinError => {
                let res = min_error_discriminate(&ensemble, tol::SOLVER_TOL)?;
                if !res.converged {
                    return Err(Error::SolverNotConverged {
                        residual: res.certificate_residual,
                        iterations: res.iterations,
                    });
                }
                Ok(res.p_error)
            }
            ObjectiveKind::UnambiguousFailure => {
                let res = unambiguous_discriminate(&ensemble, tol::SOLVER_TOL)?;
                if !res.converged {
                    return Err(Error::SolverNotConverged {
                        residual: f64::NAN,
                        iterations: 0,
                    });
                }
                Ok(res.p_failure)
            }
        }
    }

    /// Random start scored by the objective; retries a handful of times
    /// before giving up on the run.
    pub(crate) fn initial_candidate(&mut self, n: usize) -> Result<(StateVector, f64)> {
        let mut last = None;
        for _ in 0..5 {
            let x = StateVector::random(n, &mut self.rng)?;
            match self.evaluate(&x) {
                Ok(p) => return Ok((x, p)),
                Err(e) => {
                    self.discarded += 1;
                    last = Some(e);
                }
            }
        }
        Err(last.expect("at least one attempt"))
    }

    pub(crate) fn trajectory_point(
        &self,
        iteration: usize,
        p_error: f64,
        state: &StateVector,
    ) -> TrajectoryPoint {
        TrajectoryPoint {
            iteration,
            p_error,
            symmetry_index: symmetry_index(state),
        }
    }
}

pub(crate) struct RunOutcome {
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_state: StateVector,
    pub final_p_error: f64,
    pub iterations: usize,
}

pub(crate) fn std_deviation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_match_contract() {
        let cfg = SearchConfig::default();
        assert_eq!(cfg.step_size_init, 0.1);
        assert_eq!(cfg.step_decrease_rate, 0.96);
        assert_eq!(cfg.cooling_rate, 0.96);
        assert_eq!(cfg.neighbors_per_element, 4);
        assert_eq!(cfg.min_iterations, 100);
        assert_eq!(cfg.improvement_threshold, 1e-6);
        assert_eq!(cfg.sa_patience, 5);
        assert_eq!(cfg.ga_population, 40);
        assert_eq!(cfg.ga_mutation_rate, 0.1);
        cfg.validate().unwrap();
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let bad = [
            SearchConfig {
                step_decrease_rate: 1.0,
                ..Default::default()
            },
            SearchConfig {
                ga_population: 7,
                ..Default::default()
            },
            SearchConfig {
                ga_population: 2,
                ..Default::default()
            },
            SearchConfig {
                step_size_init: 0.0,
                ..Default::default()
            },
            SearchConfig {
                improvement_threshold: -1e-6,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn find_neighbor_preserves_norm_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = StateVector::random(3, &mut rng).unwrap();
        for step in [0.0, 0.05, 0.5, 3.0] {
            let mut r1 = ChaCha8Rng::seed_from_u64(42);
            let mut r2 = ChaCha8Rng::seed_from_u64(42);
            let a = find_neighbor(&x, 3, step, &mut r1);
            let b = find_neighbor(&x, 3, step, &mut r2);
            assert_eq!(a, b);
            assert!((a.norm() - 1.0).abs() < 1e-12, "step = {step}");
        }
    }

    #[test]
    fn find_neighbor_zero_step_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = StateVector::random(2, &mut rng).unwrap();
        let y = find_neighbor(&x, 1, 0.0, &mut rng);
        for j in 0..4 {
            assert!((x.amp(j) - y.amp(j)).norm() < 1e-12);
        }
    }

    #[test]
    fn std_deviation_basics() {
        assert_eq!(std_deviation(&[]), 0.0);
        assert_eq!(std_deviation(&[1.0]), 0.0);
        assert!((std_deviation(&[1.0, 1.0, 1.0]) - 0.0).abs() < 1e-15);
        assert!((std_deviation(&[0.0, 2.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trajectory_csv_format() {
        let state = StateVector::basis_state(2, 0).unwrap();
        let rec = RunRecord {
            method: Method::Hc,
            theta_deg: 30.0,
            n_sensors: 2,
            trajectory: vec![
                TrajectoryPoint {
                    iteration: 0,
                    p_error: 0.25,
                    symmetry_index: 0.5,
                },
                TrajectoryPoint {
                    iteration: 1,
                    p_error: 0.125,
                    symmetry_index: 0.25,
                },
            ],
            final_state: state,
            final_p_error: 0.125,
            wall_time_s: 0.0,
            seed: 7,
            iterations: 1,
            discarded: 0,
            config: SearchConfig::default(),
        };
        let mut buf = Vec::new();
        rec.write_trajectory_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "iteration,p_error,symmetry_index\n0,0.25,0.5\n1,0.125,0.25\n"
        );
        let json = serde_json::to_string(&rec).unwrap();
        let back: RunRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.final_p_error, 0.125);
        assert_eq!(back.method, Method::Hc);
    }
}
