//! Analytic constructions and error formulas.
//!
//! Three constructions cover the parameter space:
//!
//! - inside the orthogonal regime `θ ∈ [T, 180−T]` a state with mutually
//!   orthogonal final states exists and achieves zero error
//!   ([`orthogonal_regime_state`]);
//! - outside it, the conjectured optimum is the uniform superposition over
//!   the symmetric set minimizing the common final-state overlap
//!   ([`conjectured_optimum`]);
//! - for two sensors both regimes are provably optimal
//!   ([`two_sensor_optimum`], with `T = 45`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{Amplitude, StateVector};
use crate::symmetry::{build_partition_table, threshold_deg_any};

/// Which construction produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Mutually orthogonal final states; zero error.
    Orthogonal,
    /// Uniform weight on the overlap-minimizing symmetric set.
    Conjectured,
    /// The entangled two-sensor optimum below/above the 45°/135° band.
    TwoSensor,
}

/// A constructed initial state with its predicted optimal error.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    pub state: StateVector,
    pub predicted_error: f64,
    pub regime: Regime,
}

/// Helstrom bound: minimum error discriminating two equiprobable pure states
/// with the given overlap, `½(1 − √(1 − |⟨φ₀|φ₁⟩|²))`.
pub fn helstrom_two_state(overlap: Amplitude) -> Result<f64> {
    let o = overlap.norm();
    if o > 1.0 + 1e-9 {
        return Err(Error::DomainError(format!(
            "overlap magnitude {o} exceeds 1"
        )));
    }
    let o = o.min(1.0);
    Ok(0.5 * (1.0 - (1.0 - o * o).sqrt()))
}

/// Minimum-error probability for `n` equiprobable pure states whose pairwise
/// overlaps all equal `x ∈ [0, 1]`:
/// `1 − (1/n)(√(1 − (n−1)(1−x)/n) + (n−1)√((1−x)/n))²`.
/// Nondecreasing in `x`; 0 at `x = 0` and `1 − 1/n` at `x = 1`.
pub fn symmetric_error(n: usize, x: f64) -> Result<f64> {
    check_overlap_args(n, x)?;
    let nf = n as f64;
    let y = (1.0 - (nf - 1.0) * (1.0 - x) / nf).max(0.0).sqrt()
        + (nf - 1.0) * ((1.0 - x) / nf).sqrt();
    Ok((1.0 - y * y / nf).max(0.0))
}

/// Optimal unambiguous-discrimination failure probability for `n`
/// equiprobable states with equal pairwise overlaps `x ≥ 0`: exactly `x`.
pub fn symmetric_failure_unambiguous(n: usize, x: f64) -> Result<f64> {
    check_overlap_args(n, x)?;
    Ok(x)
}

fn check_overlap_args(n: usize, x: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::DomainError(format!(
            "symmetric formulas require n >= 2, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "common overlap x = {x} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Small slack on regime boundaries so `θ = T` computed in degrees lands on
/// the closed side.
const REGIME_EDGE_TOL: f64 = 1e-9;

fn check_theta(theta_deg: f64) -> Result<()> {
    if !(theta_deg > 0.0 && theta_deg < 180.0) || !theta_deg.is_finite() {
        return Err(Error::ThetaOutOfRange(theta_deg));
    }
    Ok(())
}

/// The zero-error construction shared by `n = 2` and `n ≥ 3`: weight
/// `1/(|S_l| − cos2θ·L_l − R_l)` on each member of `S_l` (`l = ⌊n/2⌋`),
/// the balancing weight on `S₀`, zero elsewhere.
fn orthogonal_state_any(n: usize, theta_deg: f64) -> Result<StateVector> {
    let t = threshold_deg_any(n);
    if theta_deg < t - REGIME_EDGE_TOL || theta_deg > 180.0 - t + REGIME_EDGE_TOL {
        return Err(Error::OutsideOrthogonalRegime {
            theta: theta_deg,
            n,
            low: t,
            high: 180.0 - t,
        });
    }
    let table = build_partition_table(n)?;
    let l = n / 2;
    let c = (2.0 * theta_deg.to_radians()).cos();
    let s_l = table.set_size(l) as f64;
    let r_l = table.r(l) as f64;
    let l_l = table.l(l) as f64;
    let denom = s_l - c * l_l - r_l;
    let member_weight = 1.0 / denom;
    let s0_weight = ((-c * l_l - r_l) / denom).max(0.0);

    let dim = 1usize << n;
    let mut squares = vec![0.0; dim];
    squares[0] = s0_weight;
    for (j, sq) in squares.iter_mut().enumerate().skip(1) {
        if j.count_ones() as usize == l {
            *sq = member_weight;
        }
    }
    StateVector::from_coefficient_squares(n, &squares)
}

/// Optimal two-sensor solution. Inside `θ ∈ [45, 135]` the final states can
/// be made orthogonal (zero error); outside, the entangled state
/// `(|u₊u₋⟩ + |u₋u₊⟩)/√2` is optimal with error `½(1 − √(1 − cos²2θ))`.
pub fn two_sensor_optimum(theta_deg: f64) -> Result<ClosedFormSolution> {
    check_theta(theta_deg)?;
    if (45.0 - REGIME_EDGE_TOL..=135.0 + REGIME_EDGE_TOL).contains(&theta_deg) {
        let state = orthogonal_state_any(2, theta_deg)?;
        return Ok(ClosedFormSolution {
            state,
            predicted_error: 0.0,
            regime: Regime::Orthogonal,
        });
    }
    let inv = 1.0 / 2f64.sqrt();
    let state = StateVector::new(
        2,
        vec![
            Amplitude::ZERO,
            Amplitude::new(inv, 0.0),
            Amplitude::new(inv, 0.0),
            Amplitude::ZERO,
        ],
    )?;
    let c = (2.0 * theta_deg.to_radians()).cos();
    let predicted_error = 0.5 * (1.0 - (1.0 - c * c).max(0.0).sqrt());
    Ok(ClosedFormSolution {
        state,
        predicted_error,
        regime: Regime::TwoSensor,
    })
}

/// Initial state with mutually orthogonal final states, for `n ≥ 3` and
/// `θ ∈ [T, 180−T]`: zero predicted error.
pub fn orthogonal_regime_state(n: usize, theta_deg: f64) -> Result<ClosedFormSolution> {
    check_theta(theta_deg)?;
    if n < 3 {
        return Err(Error::DomainError(format!(
            "orthogonal-regime construction requires n >= 3, got {n}; use two_sensor_optimum"
        )));
    }
    let state = orthogonal_state_any(n, theta_deg)?;
    Ok(ClosedFormSolution {
        state,
        predicted_error: 0.0,
        regime: Regime::Orthogonal,
    })
}

/// Conjectured optimum for `θ ∈ (0, T] ∪ [180−T, 180)`: uniform amplitude
/// `1/√|S_l|` on the symmetric set minimizing
/// `(R_k + cos2θ·L_k)/(R_k + L_k)` (smallest `k` on ties). The predicted
/// error composes the common overlap with [`symmetric_error`].
///
/// Strictly inside the orthogonal regime this signals
/// [`Error::InsideOrthogonalRegime`] rather than silently redirecting; at
/// `θ = T` exactly both constructions exist and coincide.
pub fn conjectured_optimum(n: usize, theta_deg: f64) -> Result<ClosedFormSolution> {
    check_theta(theta_deg)?;
    if n < 2 {
        return Err(Error::DomainError(format!(
            "conjectured optimum requires n >= 2, got {n}"
        )));
    }
    let t = threshold_deg_any(n);
    if theta_deg > t + REGIME_EDGE_TOL && theta_deg < 180.0 - t - REGIME_EDGE_TOL {
        return Err(Error::InsideOrthogonalRegime {
            theta: theta_deg,
            n,
            low: t,
            high: 180.0 - t,
        });
    }
    let table = build_partition_table(n)?;
    let c = (2.0 * theta_deg.to_radians()).cos();
    let mut best_k = 0usize;
    let mut best_val = f64::INFINITY;
    for k in 0..=n {
        let val = (table.r(k) as f64 + c * table.l(k) as f64) / table.set_size(k) as f64;
        if val < best_val {
            best_val = val;
            best_k = k;
        }
    }
    let size = table.set_size(best_k);
    let dim = 1usize << n;
    let mut squares = vec![0.0; dim];
    for (j, sq) in squares.iter_mut().enumerate() {
        if j.count_ones() as usize == best_k {
            *sq = 1.0 / size as f64;
        }
    }
    let state = StateVector::from_coefficient_squares(n, &squares)?;
    let x = best_val.clamp(0.0, 1.0);
    let predicted_error = symmetric_error(n, x)?;
    Ok(ClosedFormSolution {
        state,
        predicted_error,
        regime: Regime::Conjectured,
    })
}

/// Common pairwise overlap of the final states produced by the conjectured
/// state: `(R_l + cos2θ·L_l)/|S_l|` at the minimizing set.
pub fn conjectured_common_overlap(n: usize, theta_deg: f64) -> Result<f64> {
    check_theta(theta_deg)?;
    let table = build_partition_table(n)?;
    let c = (2.0 * theta_deg.to_radians()).cos();
    let best = (0..=n)
        .map(|k| (table.r(k) as f64 + c * table.l(k) as f64) / table.set_size(k) as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}
