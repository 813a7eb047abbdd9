//! Sweep specification: the JSON config document, flag overrides, cell
//! enumeration and the per-cell config hash.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use iso_core::{threshold_deg, Method, ObjectiveKind, SearchConfig};

use crate::errors::{CliError, CliResult};

/// Method column of a sweep: the three heuristics plus the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CliMethod {
    Hc,
    Sa,
    Ga,
    /// Conjectured optimum; routed to the orthogonal-regime construction
    /// when θ falls inside `[T, 180−T]`.
    Conjecture,
    /// Orthogonal-regime construction (requires `θ ∈ [T, 180−T]`, n ≥ 3).
    Corollary,
    /// Two-sensor optimum (requires n = 2).
    TwoSensor,
}

impl CliMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CliMethod::Hc => "hc",
            CliMethod::Sa => "sa",
            CliMethod::Ga => "ga",
            CliMethod::Conjecture => "conjecture",
            CliMethod::Corollary => "corollary",
            CliMethod::TwoSensor => "two_sensor",
        }
    }

    pub fn heuristic(&self) -> Option<Method> {
        match self {
            CliMethod::Hc => Some(Method::Hc),
            CliMethod::Sa => Some(Method::Sa),
            CliMethod::Ga => Some(Method::Ga),
            _ => None,
        }
    }
}

/// Measurement scheme of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    MinError,
    Unambiguous,
}

impl Measurement {
    pub fn name(&self) -> &'static str {
        match self {
            Measurement::MinError => "min_error",
            Measurement::Unambiguous => "unambiguous",
        }
    }

    pub fn objective(&self) -> ObjectiveKind {
        match self {
            Measurement::MinError => ObjectiveKind::MinError,
            Measurement::Unambiguous => ObjectiveKind::UnambiguousFailure,
        }
    }
}

/// θ values, either listed explicitly or as an inclusive range with step.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl ThetaGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ThetaGrid::List(v) => v.clone(),
            ThetaGrid::Range { start, stop, step } => {
                let mut out = Vec::new();
                if *step > 0.0 {
                    let mut k = 0usize;
                    loop {
                        let theta = start + step * k as f64;
                        if theta > stop + 1e-12 {
                            break;
                        }
                        out.push(theta);
                        k += 1;
                    }
                }
                out
            }
        }
    }
}

fn default_theta_grid() -> ThetaGrid {
    ThetaGrid::Range {
        start: 2.0,
        stop: 178.0,
        step: 2.0,
    }
}

fn default_n_values() -> Vec<usize> {
    vec![3]
}

fn default_methods() -> Vec<CliMethod> {
    vec![CliMethod::Hc]
}

fn default_measurement() -> Measurement {
    Measurement::MinError
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("iso-out")
}

fn default_solver_tol() -> f64 {
    iso_core::tolerances::SOLVER_TOL
}

/// One sweep: the grid, the methods, the measurement scheme and the seeds.
/// CLI flags override any value loaded from a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: ThetaGrid,
    #[serde(default = "default_methods")]
    pub methods: Vec<CliMethod>,
    #[serde(default = "default_measurement")]
    pub measurement: Measurement,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub svg: bool,
    #[serde(default = "default_solver_tol")]
    pub solver_tol: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            n_values: default_n_values(),
            theta_grid: default_theta_grid(),
            methods: default_methods(),
            measurement: default_measurement(),
            seeds: default_seeds(),
            output_dir: default_output_dir(),
            search: SearchConfig::default(),
            svg: false,
            solver_tol: default_solver_tol(),
        }
    }
}

/// Heuristic sweeps stay desk-scale.
pub const MAX_HEURISTIC_SENSORS: usize = 6;

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.n_values.is_empty() {
            return Err(CliError::Validation("no sensor counts requested".into()));
        }
        for &n in &self.n_values {
            if !(2..=12).contains(&n) {
                return Err(CliError::Validation(format!(
                    "sensor count {n} outside [2, 12]"
                )));
            }
            if n > MAX_HEURISTIC_SENSORS && self.methods.iter().any(|m| m.heuristic().is_some()) {
                return Err(CliError::Validation(format!(
                    "heuristic sweeps are capped at n <= {MAX_HEURISTIC_SENSORS}, got {n}"
                )));
            }
        }
        let thetas = self.theta_grid.values();
        if thetas.is_empty() {
            return Err(CliError::Validation("theta grid is empty".into()));
        }
        for &t in &thetas {
            if !(t > 0.0 && t < 180.0) {
                return Err(CliError::Validation(format!(
                    "theta {t} outside the open interval (0, 180)"
                )));
            }
        }
        if self.methods.is_empty() {
            return Err(CliError::Validation("no methods requested".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Validation("no seeds requested".into()));
        }
        if !self.solver_tol.is_finite() || self.solver_tol <= 0.0 {
            return Err(CliError::Validation(format!(
                "solver tolerance must be positive, got {}",
                self.solver_tol
            )));
        }
        self.search
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(())
    }

    /// Cells in the deterministic merge order `(n, θ, method, seed)`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &n in &self.n_values {
            for &theta in &self.theta_grid.values() {
                for &method in &self.methods {
                    for &seed in &self.seeds {
                        cells.push(Cell {
                            n,
                            theta_deg: theta,
                            method,
                            seed,
                        });
                    }
                }
            }
        }
        cells.sort_by(|a, b| {
            a.n.cmp(&b.n)
                .then(a.theta_deg.total_cmp(&b.theta_deg))
                .then(a.method.name().cmp(b.method.name()))
                .then(a.seed.cmp(&b.seed))
        });
        cells
    }
}

/// One sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub theta_deg: f64,
    pub method: CliMethod,
    pub seed: u64,
}

#[derive(Serialize)]
struct CellConfig<'a> {
    n: usize,
    theta_deg: f64,
    method: &'static str,
    measurement: &'static str,
    seed: u64,
    solver_tol: f64,
    search: &'a SearchConfig,
}

/// Hash of everything needed to regenerate a cell, truncated to 12 hex chars.
pub fn config_hash(spec: &SweepSpec, cell: &Cell) -> String {
    let payload = CellConfig {
        n: cell.n,
        theta_deg: cell.theta_deg,
        method: cell.method.name(),
        measurement: spec.measurement.name(),
        seed: cell.seed,
        solver_tol: spec.solver_tol,
        search: &spec.search,
    };
    let json = serde_json::to_string(&payload).expect("cell config serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest
        .iter()
        .take(6)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Is θ inside the closed orthogonal band for n sensors?
pub fn inside_orthogonal_band(n: usize, theta: f64) -> bool {
    let t = if n == 2 {
        45.0
    } else {
        match threshold_deg(n) {
            Ok(t) => t,
            Err(_) => return false,
        }
    };
    (t - 1e-9..=180.0 - t + 1e-9).contains(&theta)
}
