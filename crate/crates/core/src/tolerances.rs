//! Numeric tolerances used across the crate.
//!
//! Validation thresholds live here so that every module checks the same
//! contract; tolerances that are part of a public result type (POVM validity,
//! density-operator checks) are documented on the type as well.

/// Unit-norm requirement on stored state vectors.
pub const NORM_TOL: f64 = 1e-9;

/// Allowed deviation of ensemble prior probabilities from summing to 1.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

/// Global-phase-insensitive state equality: `|⟨a|b⟩|` within this of 1.
pub const PHASE_EQ_TOL: f64 = 1e-9;

/// Hermiticity of POVM elements, entrywise on `Π − Π†`.
pub const POVM_HERMITIAN_TOL: f64 = 1e-8;

/// Eigenvalue floor for POVM positive semidefiniteness.
pub const POVM_EIG_FLOOR: f64 = -1e-8;

/// Entrywise deviation of `Σ Π_i` from the identity.
pub const POVM_COMPLETENESS_TOL: f64 = 1e-8;

/// Density operator hermiticity / unit-trace tolerance.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalue floor for density-operator positivity.
pub const DENSITY_EIG_FLOOR: f64 = -1e-10;

/// Default certificate-residual tolerance of the discrimination solver.
pub const SOLVER_TOL: f64 = 1e-8;

/// Iteration cap of the discrimination solver.
pub const SOLVER_MAX_ITERATIONS: usize = 10_000;

/// Conditional-error cap on conclusive outcomes of the unambiguous scheme.
pub const CONDITIONAL_ERROR_TOL: f64 = 1e-7;

/// Gram-matrix minimum eigenvalue below which states count as linearly
/// dependent (unambiguous discrimination becomes infeasible).
pub const LINEAR_DEPENDENCE_TOL: f64 = 1e-10;

/// Residual norm below which a state adds no new direction to the span.
pub const SPAN_RESIDUAL_TOL: f64 = 1e-8;

/// Largest supported sensor count (dense vectors of length `2^n`).
pub const MAX_SENSORS: usize = 12;
