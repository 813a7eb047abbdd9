//! Complex linear-algebra helpers for the discrimination solvers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::qstate::StateVector;
use crate::tolerances as tol;

pub(crate) type CMatrix = DMatrix<Complex64>;
pub(crate) type CVector = DVector<Complex64>;

/// Relative eigenvalue floor applied before inverting PSD matrices.
pub(crate) const INV_EIG_REL_FLOOR: f64 = 1e-12;

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigendecomposition of a Hermitian matrix; real eigenvalues.
pub(crate) struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    pub(crate) fn new(m: &CMatrix) -> Self {
        let se = hermitian_part(m).symmetric_eigen();
        HermEig {
            values: se.eigenvalues.iter().copied().collect(),
            vectors: se.eigenvectors,
        }
    }

    pub(crate) fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    /// `V f(λ) V†`.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (c, &lambda) in self.values.iter().enumerate() {
            let fv = Complex64::new(f(lambda), 0.0);
            for r in 0..d {
                scaled[(r, c)] *= fv;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

pub(crate) fn min_eigenvalue(m: &CMatrix) -> f64 {
    HermEig::new(m).min_value()
}

/// `M^{-1/2}` of a PSD matrix, with eigenvalues floored at a small fraction
/// of the largest to keep near-singular directions bounded.
pub(crate) fn inv_sqrt_psd(m: &CMatrix) -> CMatrix {
    let eig = HermEig::new(m);
    let floor = (eig.max_abs() * INV_EIG_REL_FLOOR).max(f64::MIN_POSITIVE);
    eig.map(|l| 1.0 / l.max(floor).sqrt())
}

pub(crate) fn state_to_vector(s: &StateVector) -> CVector {
    CVector::from_iterator(s.dim(), s.amps().iter().copied())
}

/// Orthonormal basis (as matrix columns) of the span of the given states,
/// built by twice-iterated modified Gram–Schmidt. States whose residual falls
/// below [`tol::SPAN_RESIDUAL_TOL`] add no direction.
pub(crate) fn orthonormal_span(states: &[StateVector]) -> CMatrix {
    let mut basis: Vec<CVector> = Vec::new();
    for s in states {
        let mut v = state_to_vector(s);
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&v);
                v -= b * coeff;
            }
        }
        let norm = v.norm();
        if norm > tol::SPAN_RESIDUAL_TOL {
            basis.push(v.unscale(norm));
        }
    }
    CMatrix::from_columns(&basis)
}
