//! Certified minimum-error discrimination.
//!
//! The solve runs on the span of the ensemble (dimension `d ≤ n`), seeds the
//! POVM with the square-root measurement, and applies the fixed-point update
//! `Π_i ← Λ^{-1} R_i Π_i R_i Λ^{-1}` with `R_i = p_i ρ_i` and
//! `Λ = (Σ_j R_j Π_j R_j)^{1/2}`, which preserves positivity and
//! completeness. Optimality is certified from the Lagrangian operator
//! `Γ = Σ_i p_i Π_i ρ_i`: at the optimum `Γ` is Hermitian and
//! `Γ − p_i ρ_i ⪰ 0` for every `i`. The residual is
//! `‖Γ − Γ†‖_F + max_i max(0, −λ_min(Γ_h − p_i ρ_i))`; a residual of `r`
//! bounds the distance to the true optimum by `r·d` through the dual
//! feasible point `Γ_h + max-violation·I`, so the iteration stops once
//! `r ≤ tol/d`, making `p_error` accurate to `tol`.
//!
//! For pure-state ensembles an optimal POVM with rank-one elements exists;
//! the iteration keeps each element in the form `v_i v_i†` throughout.

use num_complex::Complex64;

use super::linalg::{
    hermitian_part, inv_sqrt_psd, orthonormal_span, state_to_vector, CMatrix, CVector, HermEig,
};
use super::povm::{DiscriminationResult, Povm};
use crate::error::{Error, Result};
use crate::qstate::Ensemble;
use crate::tolerances as tol;

/// Minimum-error discrimination of a pure-state ensemble, certified to `tol`.
///
/// Non-convergence within the iteration cap returns a result with
/// `converged = false` rather than an error.
pub fn min_error_discriminate(ensemble: &Ensemble, tol: f64) -> Result<DiscriminationResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::DomainError(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let m = ensemble.n_states();
    let dim_full = ensemble.dim();
    let priors = ensemble.priors();

    let basis = orthonormal_span(ensemble.states());
    let d = basis.ncols();
    let basis_adj = basis.adjoint();
    let reduced: Vec<CVector> = ensemble
        .states()
        .iter()
        .map(|s| &basis_adj * state_to_vector(s))
        .collect();

    // R_i = p_i ρ_i on the span.
    let weighted_projectors: Vec<CMatrix> = reduced
        .iter()
        .zip(priors)
        .map(|(c, &p)| (c * c.adjoint()) * Complex64::new(p, 0.0))
        .collect();

    // Square-root-measurement seed: Π_i = ρ^{-1/2} R_i ρ^{-1/2} = v_i v_i†.
    let mut rho = CMatrix::zeros(d, d);
    for r in &weighted_projectors {
        rho += r;
    }
    let whitener = inv_sqrt_psd(&rho);
    let mut povm_vectors: Vec<CVector> = reduced
        .iter()
        .zip(priors)
        .map(|(c, &p)| (&whitener * c) * Complex64::new(p.sqrt(), 0.0))
        .collect();

    let target = tol / d as f64;
    let mut residual_trace = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;
    let mut residual;

    loop {
        residual = certificate_residual(&reduced, priors, &povm_vectors, &weighted_projectors);
        residual_trace.push(residual);
        if residual <= target {
            converged = true;
            break;
        }
        if iterations >= tol::SOLVER_MAX_ITERATIONS {
            break;
        }
        iterations += 1;

        // M = Σ R_i Π_i R_i = Σ p_i² |⟨c_i|v_i⟩|² c_i c_i†.
        let mut mixer = CMatrix::zeros(d, d);
        let mut gammas = Vec::with_capacity(m);
        for ((c, v), &p) in reduced.iter().zip(&povm_vectors).zip(priors) {
            let g = c.dotc(v);
            gammas.push(g);
            let w = p * p * g.norm_sqr();
            mixer += (c * c.adjoint()) * Complex64::new(w, 0.0);
        }
        let lambda_inv = inv_sqrt_psd(&mixer);
        for ((c, v), (&p, g)) in reduced
            .iter()
            .zip(povm_vectors.iter_mut())
            .zip(priors.iter().zip(&gammas))
        {
            *v = (&lambda_inv * c) * Complex64::new(p * g.norm(), 0.0);
        }

        // Restore exact completeness against floating-point drift.
        let mut sum = CMatrix::zeros(d, d);
        for v in &povm_vectors {
            sum += v * v.adjoint();
        }
        let corrector = inv_sqrt_psd(&sum);
        for v in povm_vectors.iter_mut() {
            *v = &corrector * &*v;
        }
    }

    let p_success: f64 = reduced
        .iter()
        .zip(&povm_vectors)
        .zip(priors)
        .map(|((c, v), &p)| p * v.dotc(c).norm_sqr())
        .sum();
    let p_error = (1.0 - p_success).clamp(0.0, 1.0);

    // Embed the POVM back into the full space; the orthogonal complement of
    // the span is assigned to element 0.
    let mut elements: Vec<CMatrix> = povm_vectors
        .iter()
        .map(|v| {
            let full = &basis * v;
            &full * full.adjoint()
        })
        .collect();
    let complement = CMatrix::identity(dim_full, dim_full) - &basis * &basis_adj;
    elements[0] += complement;

    Ok(DiscriminationResult {
        povm: Povm::new(elements),
        p_error,
        certificate_residual: residual,
        iterations,
        converged,
        residual_trace,
    })
}

fn certificate_residual(
    reduced: &[CVector],
    priors: &[f64],
    povm_vectors: &[CVector],
    weighted_projectors: &[CMatrix],
) -> f64 {
    let d = reduced[0].len();
    // Γ = Σ p_i Π_i ρ_i = Σ p_i ⟨v_i|c_i⟩ v_i c_i†.
    let mut gamma = CMatrix::zeros(d, d);
    for ((c, v), &p) in reduced.iter().zip(povm_vectors).zip(priors) {
        let coeff = v.dotc(c) * Complex64::new(p, 0.0);
        gamma += (v * c.adjoint()) * coeff;
    }
    let asym = (&gamma - gamma.adjoint()).norm();
    let gamma_h = hermitian_part(&gamma);
    let mut violation = 0.0f64;
    for r in weighted_projectors {
        let lambda_min = HermEig::new(&(&gamma_h - r)).min_value();
        violation = violation.max(-lambda_min);
    }
    asym + violation.max(0.0)
}
