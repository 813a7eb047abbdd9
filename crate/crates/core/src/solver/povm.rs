//! POVM representation and the solver result types.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances as tol;

/// A positive operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<DMatrix<Complex64>>,
}

impl Povm {
    pub(crate) fn new(elements: Vec<DMatrix<Complex64>>) -> Self {
        let dim = elements.first().map_or(0, DMatrix::nrows);
        Self { dim, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[DMatrix<Complex64>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &DMatrix<Complex64> {
        &self.elements[i]
    }

    /// Checks the POVM contract: every element Hermitian within
    /// [`tol::POVM_HERMITIAN_TOL`], eigenvalues above
    /// [`tol::POVM_EIG_FLOOR`], and `Σ Π_i = I` entrywise within
    /// [`tol::POVM_COMPLETENESS_TOL`].
    pub fn validate(&self) -> Result<()> {
        let mut sum = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (i, e) in self.elements.iter().enumerate() {
            if e.nrows() != self.dim || e.ncols() != self.dim {
                return Err(Error::DimensionMismatch {
                    left: e.nrows(),
                    right: self.dim,
                });
            }
            let herm_dev = (e - e.adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            if herm_dev > tol::POVM_HERMITIAN_TOL {
                return Err(Error::DomainError(format!(
                    "POVM element {i} not Hermitian (deviation {herm_dev:.3e})"
                )));
            }
            let min_eig = super::linalg::min_eigenvalue(e);
            if min_eig < tol::POVM_EIG_FLOOR {
                return Err(Error::DomainError(format!(
                    "POVM element {i} has negative eigenvalue {min_eig:.3e}"
                )));
            }
            sum += e;
        }
        for r in 0..self.dim {
            for c in 0..self.dim {
                let expected = if r == c { Complex64::ONE } else { Complex64::ZERO };
                if (sum[(r, c)] - expected).norm() > tol::POVM_COMPLETENESS_TOL {
                    return Err(Error::DomainError(format!(
                        "POVM completeness violated at ({r}, {c}) by {:.3e}",
                        (sum[(r, c)] - expected).norm()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a minimum-error discrimination solve.
///
/// `converged` guarantees `certificate_residual ≤` the configured tolerance
/// and hence `p_error` within that tolerance of the true optimum.
#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub povm: Povm,
    pub p_error: f64,
    pub certificate_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Certificate residual recorded at every iterate.
    pub residual_trace: Vec<f64>,
}

/// Outcome of an unambiguous discrimination solve: `n` conclusive elements
/// plus a final inconclusive one. Conclusive outcomes never misidentify
/// (cross terms below [`tol::CONDITIONAL_ERROR_TOL`]).
#[derive(Debug, Clone)]
pub struct UnambiguousResult {
    pub povm: Povm,
    pub p_failure: f64,
    pub converged: bool,
}
