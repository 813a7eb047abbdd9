//! Initial-state optimization for quantum detector sensor networks.
//!
//! A network of `n` qubit detector sensors shares a global state `|ψ⟩`. When an
//! event fires sensor `i`, the state becomes
//! `|φᵢ⟩ = (I ⊗ … ⊗ U ⊗ … ⊗ I)|ψ⟩` with a fixed unitary `U` of eigenvalues
//! `e^{±iθ}`. Identifying the firing sensor is a quantum state discrimination
//! problem; the quality of an initial state is the minimum error probability
//! `P(|ψ⟩, U)` achievable by an optimal measurement over the final states.
//!
//! This crate provides:
//!
//! - [`qstate`] — state vectors, the sensor unitary, final-state construction;
//! - [`symmetry`] — the symmetric-set partition of coefficient-squares, the
//!   orthogonality threshold `T(n)`, the symmetry index, sensor renumbering,
//!   and state averaging;
//! - [`closed_form`] — analytic optima: the two-sensor solution, the
//!   orthogonal-regime construction, the conjectured optimum below threshold,
//!   and the equal-overlap error/failure formulas;
//! - [`solver`] — certified numerical minimum-error and unambiguous
//!   discrimination;
//! - [`heuristics`] — hill climbing, simulated annealing, and a genetic
//!   algorithm over unit-norm complex state vectors.

pub mod closed_form;
pub mod error;
pub mod heuristics;
pub mod qstate;
pub mod solver;
pub mod symmetry;
pub mod tolerances;

pub use closed_form::{
    conjectured_optimum, helstrom_two_state, orthogonal_regime_state, symmetric_error,
    symmetric_failure_unambiguous, two_sensor_optimum, ClosedFormSolution, Regime,
};
pub use error::{Error, Result};
pub use heuristics::{
    find_neighbor, genetic_search, hill_climb, run_method, simulated_anneal, Method,
    ObjectiveKind, RunRecord, SearchConfig, TrajectoryPoint,
};
pub use qstate::{Amplitude, DensityOperator, Ensemble, SensorUnitary, StateVector};
pub use solver::{
    gram_matrix, min_error_discriminate, objective_p, symmetric_overlap_ensemble,
    unambiguous_discriminate, DiscriminationResult, Povm, UnambiguousResult,
};
pub use symmetry::{
    average_state, build_partition_table, min_ratio, partition_index, permute_state,
    rhs_membership, symmetry_index, threshold_deg, PartitionTable, SensorPermutation,
};
