//! Optimal unambiguous discrimination of linearly independent pure states.
//!
//! Conclusive elements are built on the reciprocal (dual) states
//! `⟨φ̃_i|φ_j⟩ = δ_ij`, so `Π_i = a_i |φ̃_i⟩⟨φ̃_i|` never misidentifies and
//! the only freedom is the weight vector `a`. Completeness of the
//! inconclusive element reduces exactly to `G − diag(a) ⪰ 0` on the Gram
//! matrix `G`, leaving the convex program
//!
//! ```text
//! maximize Σ p_i a_i   subject to   G − diag(a) ⪰ 0,  a ≥ 0,
//! ```
//!
//! solved here with a log-det barrier and damped Newton steps. The barrier
//! parameter bounds the duality gap by `2n·μ`, which is driven below the
//! requested tolerance.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::linalg::{min_eigenvalue, orthonormal_span, state_to_vector, CMatrix};
use super::povm::{Povm, UnambiguousResult};
use super::gram_matrix;
use crate::error::{Error, Result};
use crate::qstate::Ensemble;
use crate::tolerances as tol;

/// Unambiguous discrimination with minimum average failure probability.
///
/// Errors with [`Error::LinearlyDependent`] when the states do not admit an
/// unambiguous measurement.
pub fn unambiguous_discriminate(ensemble: &Ensemble, tol: f64) -> Result<UnambiguousResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::DomainError(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let m = ensemble.n_states();
    let dim_full = ensemble.dim();
    let gram = gram_matrix(ensemble);
    let gram_min = min_eigenvalue(&gram);
    if gram_min <= tol::LINEAR_DEPENDENCE_TOL {
        return Err(Error::LinearlyDependent(gram_min));
    }

    let (weights, converged) = optimal_weights(&gram, ensemble.priors(), gram_min, tol);

    // Reciprocal states in the reduced basis: columns of (A^{-1})†.
    let basis = orthonormal_span(ensemble.states());
    let d = basis.ncols();
    debug_assert_eq!(d, m, "independent states span exactly m dimensions");
    let basis_adj = basis.adjoint();
    let mut a_mat = CMatrix::zeros(d, m);
    for (i, s) in ensemble.states().iter().enumerate() {
        a_mat.set_column(i, &(&basis_adj * state_to_vector(s)));
    }
    let a_inv = a_mat
        .lu()
        .try_inverse()
        .ok_or(Error::LinearlyDependent(gram_min))?;
    let dual = a_inv.adjoint(); // column i satisfies ⟨ã_i|c_j⟩ = δ_ij

    let mut elements: Vec<CMatrix> = Vec::with_capacity(m + 1);
    let mut sum_full = CMatrix::zeros(dim_full, dim_full);
    for (i, &a_i) in weights.iter().enumerate() {
        let col = dual.column(i).into_owned();
        let full = &basis * col;
        let element = (&full * full.adjoint()) * Complex64::new(a_i, 0.0);
        sum_full += &element;
        elements.push(element);
    }
    let inconclusive = CMatrix::identity(dim_full, dim_full) - sum_full;
    elements.push(inconclusive);

    let p_failure = (1.0
        - ensemble
            .priors()
            .iter()
            .zip(&weights)
            .map(|(&p, &a)| p * a)
            .sum::<f64>())
    .clamp(0.0, 1.0);

    Ok(UnambiguousResult {
        povm: Povm::new(elements),
        p_failure,
        converged,
    })
}

/// Barrier solve of `max p·a` over `{a ≥ 0 : G − diag(a) ⪰ 0}`.
fn optimal_weights(
    gram: &CMatrix,
    priors: &[f64],
    gram_min: f64,
    tol: f64,
) -> (Vec<f64>, bool) {
    let m = priors.len();
    let p = DVector::from_column_slice(priors);
    let mut a = DVector::from_element(m, 0.5 * gram_min);
    let gap_bound = 2.0 * m as f64;
    let gap_target = tol.min(1e-9);
    let mut mu = 0.25f64;
    let mut converged = false;

    for _stage in 0..200 {
        let mut newton_ok = false;
        for _newton in 0..100 {
            let slack = slack_matrix(gram, &a);
            let lower = match psd_cholesky(&slack) {
                Some(l) => l,
                None => break,
            };
            let slack_inv = Cholesky::new(slack)
                .expect("positive pivots verified")
                .inverse();
            // ∇φ_i = −p_i + μ([M^{-1}]_{ii} − 1/a_i); barrier Hessian is
            // μ(|M^{-1}|∘|M^{-1}| + diag(1/a²)).
            let mut grad = DVector::zeros(m);
            let mut hess = DMatrix::zeros(m, m);
            for i in 0..m {
                grad[i] = -p[i] + mu * (slack_inv[(i, i)].re - 1.0 / a[i]);
                for j in 0..m {
                    hess[(i, j)] = mu * slack_inv[(i, j)].norm_sqr();
                }
                hess[(i, i)] += mu / (a[i] * a[i]);
            }
            let hess_chol = match Cholesky::new(hess) {
                Some(c) => c,
                None => break,
            };
            let step = hess_chol.solve(&(-&grad));
            let decrement_sq = -grad.dot(&step);
            if decrement_sq < 1e-16 {
                newton_ok = true;
                break;
            }
            let current = barrier_value_from(&lower, &a, &p, mu);
            let mut t = 1.0f64;
            let mut moved = false;
            for _ in 0..60 {
                let candidate = &a + &step * t;
                if let Some(value) = barrier_value(gram, &candidate, &p, mu) {
                    if value <= current - 0.25 * t * decrement_sq {
                        a = candidate;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                // Steps stalled at line-search resolution; accept the point.
                newton_ok = decrement_sq < 1e-10;
                break;
            }
        }
        if gap_bound * mu <= gap_target {
            converged = newton_ok;
            break;
        }
        mu *= 0.2;
    }
    (a.iter().copied().collect(), converged)
}

fn slack_matrix(gram: &CMatrix, a: &DVector<f64>) -> CMatrix {
    let mut slack = gram.clone();
    for i in 0..a.len() {
        slack[(i, i)] -= Complex64::new(a[i], 0.0);
    }
    slack
}

/// Cholesky of a Hermitian matrix that rejects non-positive pivots.
/// (`nalgebra::Cholesky` accepts indefinite complex input, taking complex
/// square roots of negative pivots, so it cannot serve as a PD test.)
fn psd_cholesky(m: &CMatrix) -> Option<CMatrix> {
    let n = m.nrows();
    let mut l = m.clone();
    for j in 0..n {
        let mut pivot = l[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if pivot <= 0.0 || !pivot.is_finite() {
            return None;
        }
        let root = pivot.sqrt();
        l[(j, j)] = Complex64::new(root, 0.0);
        for i in (j + 1)..n {
            let mut v = l[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / root;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            l[(i, j)] = Complex64::ZERO;
        }
    }
    Some(l)
}

/// `φ_μ(a) = −p·a − μ(log det(G − diag a) + Σ log a_i)`, or `None` outside
/// the feasible interior.
fn barrier_value(gram: &CMatrix, a: &DVector<f64>, p: &DVector<f64>, mu: f64) -> Option<f64> {
    if a.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let lower = psd_cholesky(&slack_matrix(gram, a))?;
    Some(barrier_value_from(&lower, a, p, mu))
}

fn barrier_value_from(lower: &CMatrix, a: &DVector<f64>, p: &DVector<f64>, mu: f64) -> f64 {
    let m = a.len();
    let logdet: f64 = (0..m).map(|j| 2.0 * lower[(j, j)].re.ln()).sum();
    let logs: f64 = a.iter().map(|&v| v.ln()).sum();
    -p.dot(a) - mu * (logdet + logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::conjectured_optimum;
    use crate::qstate::{SensorUnitary, StateVector};
    use crate::solver::symmetric_overlap_ensemble;

    #[test]
    fn symmetric_overlap_failure_equals_overlap() {
        let sol = conjectured_optimum(3, 30.0).unwrap();
        let u = SensorUnitary::new(30.0).unwrap();
        let ens = sol.state.final_states(&u).unwrap();
        let res = unambiguous_discriminate(&ens, 1e-8).unwrap();
        assert!(res.converged);
        assert!(
            (res.p_failure - 2.0 / 3.0).abs() < 1e-5,
            "p_failure = {}",
            res.p_failure
        );
        res.povm.validate().unwrap();
        assert_eq!(res.povm.n_outcomes(), 4);
    }

    #[test]
    fn orthogonal_states_never_fail() {
        let ens = symmetric_overlap_ensemble(3, 0.0).unwrap();
        let res = unambiguous_discriminate(&ens, 1e-8).unwrap();
        assert!(res.converged);
        assert!(res.p_failure <= 1e-6, "p_failure = {}", res.p_failure);
    }

    /// Brute-force two-state optimum: scan a₀, take the largest feasible
    /// a₁ from det(G − diag a) ≥ 0, minimize the failure.
    fn two_state_failure_oracle(x: f64) -> f64 {
        let mut best = f64::INFINITY;
        let steps = 200_000usize;
        for k in 0..=steps {
            let a0 = k as f64 / steps as f64;
            let headroom = 1.0 - a0;
            let a1 = if headroom > 0.0 {
                (1.0 - x * x / headroom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            best = best.min(1.0 - 0.5 * (a0 + a1));
        }
        best
    }

    #[test]
    fn two_states_overlap_half() {
        let oracle = two_state_failure_oracle(0.5);
        assert!((oracle - 0.5).abs() < 1e-5, "oracle = {oracle}");
        let ens = symmetric_overlap_ensemble(2, 0.5).unwrap();
        let res = unambiguous_discriminate(&ens, 1e-8).unwrap();
        assert!(res.converged);
        assert!(
            (res.p_failure - oracle).abs() < 1e-5,
            "p_failure = {} vs oracle {oracle}",
            res.p_failure
        );
    }

    #[test]
    fn conclusive_outcomes_have_zero_conditional_error() {
        let ens = symmetric_overlap_ensemble(4, 0.3).unwrap();
        let res = unambiguous_discriminate(&ens, 1e-8).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let phi = state_to_vector(ens.state(j));
                let cross = (phi.adjoint() * res.povm.element(i) * &phi)[(0, 0)].re;
                assert!(
                    cross.abs() <= crate::tolerances::CONDITIONAL_ERROR_TOL,
                    "cross term ({i}, {j}) = {cross:.3e}"
                );
            }
        }
    }

    #[test]
    fn linearly_dependent_states_are_rejected() {
        let s = StateVector::basis_state(2, 1).unwrap();
        let ens = Ensemble::uniform(vec![s.clone(), s]).unwrap();
        assert!(matches!(
            unambiguous_discriminate(&ens, 1e-8),
            Err(Error::LinearlyDependent(_))
        ));
        let identical = symmetric_overlap_ensemble(3, 1.0).unwrap();
        assert!(unambiguous_discriminate(&identical, 1e-8).is_err());
    }
}

