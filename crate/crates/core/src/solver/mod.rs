//! Numerical discrimination of the final states: minimum-error and
//! unambiguous measurement schemes, both with optimality guarantees.
//!
//! Priors are general here; the initial-state optimization layer always uses
//! uniform priors when it builds final-state ensembles.

mod linalg;
mod min_error;
mod povm;
mod unambiguous;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use min_error::min_error_discriminate;
pub use povm::{DiscriminationResult, Povm, UnambiguousResult};
pub use unambiguous::unambiguous_discriminate;

use crate::error::{Error, Result};
use crate::qstate::{Ensemble, SensorUnitary, StateVector};
use crate::tolerances as tol;

/// Gram matrix `G[i][j] = ⟨φ_i|φ_j⟩` of the ensemble states.
pub fn gram_matrix(ensemble: &Ensemble) -> DMatrix<Complex64> {
    let m = ensemble.n_states();
    DMatrix::from_fn(m, m, |i, j| {
        ensemble
            .state(i)
            .inner_product(ensemble.state(j))
            .expect("ensemble states share one dimension")
    })
}

/// The objective `P(|ψ⟩, U)`: certified minimum error probability of
/// discriminating the final states under uniform priors. Propagates solver
/// non-convergence as an error.
pub fn objective_p(psi: &StateVector, u: &SensorUnitary) -> Result<f64> {
    let ensemble = psi.final_states(u)?;
    let result = min_error_discriminate(&ensemble, tol::SOLVER_TOL)?;
    if !result.converged {
        return Err(Error::SolverNotConverged {
            residual: result.certificate_residual,
            iterations: result.iterations,
        });
    }
    Ok(result.p_error)
}

/// Builds `m` equiprobable unit states whose pairwise overlaps all equal
/// `x ∈ [0, 1]`, embedded in the smallest sensor register that holds them.
/// The Gram matrix `(1−x)I + xJ` has the closed-form square root
/// `αI + βJ`, whose columns are the states.
pub fn symmetric_overlap_ensemble(m: usize, x: f64) -> Result<Ensemble> {
    if m < 2 {
        return Err(Error::DomainError(format!(
            "symmetric ensemble needs at least two states, got {m}"
        )));
    }
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "common overlap x = {x} outside [0, 1]"
        )));
    }
    let n_sensors = (usize::BITS - (m - 1).leading_zeros()).max(1) as usize;
    let dim = 1usize << n_sensors;
    let mf = m as f64;
    let alpha = (1.0 - x).sqrt();
    let beta = ((1.0 - x + mf * x).sqrt() - alpha) / mf;
    let states = (0..m)
        .map(|i| {
            let mut amps = vec![Complex64::ZERO; dim];
            for (r, amp) in amps.iter_mut().enumerate().take(m) {
                let value = if r == i { alpha + beta } else { beta };
                *amp = Complex64::new(value, 0.0);
            }
            StateVector::new(n_sensors, amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}
