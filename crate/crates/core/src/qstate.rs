//! State vectors, the sensor unitary, and the final-state family.
//!
//! Basis convention: the eigenvectors of the sensor unitary are mapped onto
//! the computational basis with `u₋ ↦ |0⟩` and `u₊ ↦ |1⟩`, so the unitary is
//! `diag(e^{−iθ}, e^{+iθ})` on every sensor. Basis index `j` is read
//! most-significant-bit first: sensor 0 owns the top bit of `j`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerances as tol;

/// A single complex amplitude.
pub type Amplitude = Complex64;

/// Pure state of `n_sensors` qubit sensors: `2^n` complex amplitudes,
/// unit norm within [`tol::NORM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sensors: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a state from explicit amplitudes, validating length, finiteness
    /// and unit norm.
    pub fn new(n_sensors: usize, amps: Vec<Amplitude>) -> Result<Self> {
        if n_sensors == 0 || n_sensors > tol::MAX_SENSORS {
            return Err(Error::SensorCountOutOfRange(n_sensors));
        }
        let dim = 1usize << n_sensors;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: dim,
            });
        }
        for (j, a) in amps.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(j));
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::NotNormalized {
                deficit: (norm - 1.0).abs(),
            });
        }
        Ok(Self { n_sensors, amps })
    }

    /// Computational basis state `|j⟩`.
    pub fn basis_state(n_sensors: usize, j: usize) -> Result<Self> {
        if n_sensors == 0 || n_sensors > tol::MAX_SENSORS {
            return Err(Error::SensorCountOutOfRange(n_sensors));
        }
        let dim = 1usize << n_sensors;
        if j >= dim {
            return Err(Error::BasisIndexOutOfRange { index: j, dim });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[j] = Complex64::ONE;
        Self::new(n_sensors, amps)
    }

    /// Haar-direction random state: i.i.d. complex Gaussian amplitudes,
    /// normalized.
    pub fn random<R: Rng + ?Sized>(n_sensors: usize, rng: &mut R) -> Result<Self> {
        if n_sensors == 0 || n_sensors > tol::MAX_SENSORS {
            return Err(Error::SensorCountOutOfRange(n_sensors));
        }
        let dim = 1usize << n_sensors;
        let amps: Vec<Amplitude> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self::renormalized(n_sensors, amps))
    }

    /// Builds the non-negative real state whose coefficient-squares are
    /// `squares` (length `2^n`, summing to 1 within the norm tolerance).
    pub fn from_coefficient_squares(n_sensors: usize, squares: &[f64]) -> Result<Self> {
        let amps = squares
            .iter()
            .map(|&s| Complex64::new(s.max(0.0).sqrt(), 0.0))
            .collect();
        Self::new(n_sensors, amps)
    }

    /// Renormalizes a raw amplitude vector. Callers guarantee the norm is
    /// bounded away from zero.
    pub(crate) fn renormalized(n_sensors: usize, mut amps: Vec<Amplitude>) -> Self {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { n_sensors, amps }
    }

    pub fn n_sensors(&self) -> usize {
        self.n_sensors
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, j: usize) -> Amplitude {
        self.amps[j]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficient-squares `|ψ_j|²` in basis order.
    pub fn coefficient_squares(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Amplitude> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies the sensor unitary to sensor `i`, producing the final state
    /// `|φᵢ⟩ = (I^{⊗i} ⊗ U ⊗ I^{⊗(n−i−1)})|ψ⟩`.
    pub fn apply_at(&self, u: &SensorUnitary, sensor: usize) -> Result<StateVector> {
        if sensor >= self.n_sensors {
            return Err(Error::SensorIndexOutOfRange {
                index: sensor,
                n_sensors: self.n_sensors,
            });
        }
        let shift = self.n_sensors - 1 - sensor;
        let plus = u.eigenvalue_plus();
        let minus = u.eigenvalue_minus();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if (j >> shift) & 1 == 1 {
                    a * plus
                } else {
                    a * minus
                }
            })
            .collect();
        Ok(StateVector {
            n_sensors: self.n_sensors,
            amps,
        })
    }

    /// The `n` equiprobable final states `{|φᵢ⟩}`.
    pub fn final_states(&self, u: &SensorUnitary) -> Result<Ensemble> {
        let states = (0..self.n_sensors)
            .map(|i| self.apply_at(u, i))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::uniform(states)
    }

    /// Equality up to a global phase: `|⟨a|b⟩| = 1` within `tolerance`.
    pub fn equals_up_to_phase(&self, other: &StateVector, tolerance: f64) -> bool {
        match self.inner_product(other) {
            Ok(ip) => (ip.norm() - 1.0).abs() <= tolerance,
            Err(_) => false,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    n: usize,
    amps: Vec<(f64, f64)>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateWire {
            n: self.n_sensors,
            amps: self.amps.iter().map(|a| (a.re, a.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let wire = StateWire::deserialize(deserializer)?;
        let amps = wire
            .amps
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        StateVector::new(wire.n, amps).map_err(D::Error::custom)
    }
}

/// The event unitary, parameterized by `θ` in degrees with eigenvalues
/// `e^{±iθ}`. In the fixed eigenbasis it is `diag(e^{−iθ}, e^{+iθ})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorUnitary {
    theta_deg: f64,
}

impl SensorUnitary {
    /// `θ` must lie in the open interval (0, 180) degrees.
    pub fn new(theta_deg: f64) -> Result<Self> {
        if !(theta_deg > 0.0 && theta_deg < 180.0) || !theta_deg.is_finite() {
            return Err(Error::ThetaOutOfRange(theta_deg));
        }
        Ok(Self { theta_deg })
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta_deg.to_radians()
    }

    /// `cos 2θ`, the quantity steering every overlap formula.
    pub fn cos_two_theta(&self) -> f64 {
        (2.0 * self.theta_rad()).cos()
    }

    /// Eigenvalue on `u₊` (`e^{+iθ}`).
    pub fn eigenvalue_plus(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta_rad())
    }

    /// Eigenvalue on `u₋` (`e^{−iθ}`).
    pub fn eigenvalue_minus(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.theta_rad())
    }

    /// Matrix form in the `(u₋, u₊)` basis.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            self.eigenvalue_minus(),
            Complex64::ZERO,
            Complex64::ZERO,
            self.eigenvalue_plus(),
        )
    }
}

/// A list of pure states with prior probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<StateVector>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<StateVector>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidPriors("empty ensemble".into()));
        }
        if states.len() != priors.len() {
            return Err(Error::DimensionMismatch {
                left: states.len(),
                right: priors.len(),
            });
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: dim,
                });
            }
        }
        if let Some(p) = priors.iter().find(|&&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidPriors(format!("negative prior {p}")));
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > tol::PRIOR_SUM_TOL {
            return Err(Error::InvalidPriors(format!(
                "sum deviates from 1 by {:.3e}",
                (sum - 1.0).abs()
            )));
        }
        Ok(Self { states, priors })
    }

    /// Equal priors `1/n`.
    pub fn uniform(states: Vec<StateVector>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidPriors("empty ensemble".into()));
        }
        let priors = vec![1.0 / n as f64; n];
        Self::new(states, priors)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &StateVector {
        &self.states[i]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }
}

/// Dense density operator; houses `|φ⟩⟨φ|` projectors and validation of
/// hermiticity, unit trace and positivity.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn from_pure(state: &StateVector) -> Self {
        let d = state.dim();
        let matrix =
            DMatrix::from_fn(d, d, |r, c| state.amp(r) * state.amp(c).conj());
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Checks hermiticity and unit trace within [`tol::DENSITY_TOL`] and
    /// eigenvalues above [`tol::DENSITY_EIG_FLOOR`].
    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let herm_dev = (m - m.adjoint()).norm();
        if herm_dev > tol::DENSITY_TOL {
            return Err(Error::DomainError(format!(
                "density operator not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace_dev = (m.trace().re - 1.0).abs() + m.trace().im.abs();
        if trace_dev > tol::DENSITY_TOL {
            return Err(Error::DomainError(format!(
                "density operator trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        let eigs = m.clone().symmetric_eigen().eigenvalues;
        if let Some(lambda) = eigs.iter().find(|&&l| l < tol::DENSITY_EIG_FLOOR) {
            return Err(Error::DomainError(format!(
                "density operator has negative eigenvalue {lambda:.3e}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unitary_theta_90_is_diag_i_minus_i() {
        let u = SensorUnitary::new(90.0).unwrap();
        let m = u.matrix();
        // u₋ ↦ |0⟩ carries e^{−iθ} = −i, u₊ ↦ |1⟩ carries e^{+iθ} = i.
        assert!((m[(0, 0)] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((m[(1, 1)] - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(m[(0, 1)], Complex64::ZERO);
        assert_eq!(m[(1, 0)], Complex64::ZERO);
    }

    #[test]
    fn unitary_theta_60_eigenvalue_arguments() {
        let u = SensorUnitary::new(60.0).unwrap();
        assert_relative_eq!(u.eigenvalue_plus().arg().to_degrees(), 60.0, epsilon = 1e-12);
        assert_relative_eq!(
            u.eigenvalue_minus().arg().to_degrees(),
            -60.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn unitary_rejects_boundary_theta() {
        assert!(matches!(
            SensorUnitary::new(180.0),
            Err(Error::ThetaOutOfRange(_))
        ));
        assert!(matches!(
            SensorUnitary::new(0.0),
            Err(Error::ThetaOutOfRange(_))
        ));
        assert!(SensorUnitary::new(179.999).is_ok());
    }

    #[test]
    fn apply_at_eigenstate_gains_global_phase() {
        // |u₊u₊⟩ = |11⟩ = |3⟩ for n = 2.
        let psi = StateVector::basis_state(2, 3).unwrap();
        let u = SensorUnitary::new(30.0).unwrap();
        let phi = psi.apply_at(&u, 0).unwrap();
        let expected = Complex64::from_polar(1.0, 30f64.to_radians());
        assert!((phi.amp(3) - expected).norm() < 1e-12);
        assert!(phi.equals_up_to_phase(&psi, 1e-12));
    }

    #[test]
    fn apply_at_acts_diagonally_on_superposition() {
        // (|u₊u₋⟩ + |u₋u₊⟩)/√2 = (|10⟩ + |01⟩)/√2 = (|2⟩ + |1⟩)/√2.
        let inv = 1.0 / 2f64.sqrt();
        let psi = StateVector::new(2, vec![c(0.0, 0.0), c(inv, 0.0), c(inv, 0.0), c(0.0, 0.0)])
            .unwrap();
        let theta = 73.0;
        let u = SensorUnitary::new(theta).unwrap();
        let phi = psi.apply_at(&u, 0).unwrap();
        let plus = Complex64::from_polar(inv, theta.to_radians());
        let minus = Complex64::from_polar(inv, -theta.to_radians());
        assert!((phi.amp(2) - plus).norm() < 1e-12);
        assert!((phi.amp(1) - minus).norm() < 1e-12);
    }

    #[test]
    fn apply_at_rejects_out_of_range_sensor() {
        let psi = StateVector::basis_state(2, 0).unwrap();
        let u = SensorUnitary::new(45.0).unwrap();
        assert!(matches!(
            psi.apply_at(&u, 2),
            Err(Error::SensorIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn final_states_uniform_priors() {
        let psi = StateVector::basis_state(2, 1).unwrap();
        let u = SensorUnitary::new(50.0).unwrap();
        let ens = psi.final_states(&u).unwrap();
        assert_eq!(ens.n_states(), 2);
        assert_eq!(ens.priors(), &[0.5, 0.5]);
    }

    #[test]
    fn final_states_single_sensor_degenerate() {
        let psi = StateVector::basis_state(1, 0).unwrap();
        let u = SensorUnitary::new(10.0).unwrap();
        let ens = psi.final_states(&u).unwrap();
        assert_eq!(ens.n_states(), 1);
        assert_eq!(ens.priors(), &[1.0]);
    }

    #[test]
    fn inner_product_basics() {
        let a = StateVector::basis_state(2, 2).unwrap(); // |u₊u₋⟩
        let b = StateVector::basis_state(2, 1).unwrap(); // |u₋u₊⟩
        assert_eq!(a.inner_product(&a).unwrap(), Complex64::ONE);
        assert_eq!(a.inner_product(&b).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn inner_product_conjugate_symmetric() {
        let a = StateVector::renormalized(
            2,
            vec![c(0.3, 0.1), c(-0.2, 0.7), c(0.5, -0.1), c(0.0, 0.2)],
        );
        let b = StateVector::renormalized(
            2,
            vec![c(-0.1, 0.4), c(0.6, 0.0), c(0.2, 0.2), c(-0.3, 0.5)],
        );
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let a = StateVector::basis_state(2, 0).unwrap();
        let b = StateVector::basis_state(3, 0).unwrap();
        assert!(matches!(
            a.inner_product(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn overlap_of_uniform_state_matches_pairwise_formula() {
        // All |ψ_j|² = 1/8 for n = 3: ⟨φ₀|φ₁⟩ = (2/8)e^{+2iθ} + (2/8)e^{−2iθ} + 4/8.
        let n = 3;
        let amps = vec![c((1f64 / 8.0).sqrt(), 0.0); 8];
        let psi = StateVector::new(n, amps).unwrap();
        for theta in [17.0, 30.0, 88.5] {
            let u = SensorUnitary::new(theta).unwrap();
            let ens = psi.final_states(&u).unwrap();
            let z0 = ens.state(0).inner_product(ens.state(1)).unwrap();
            let two_theta = 2.0 * theta.to_radians();
            let expected = Complex64::from_polar(0.25, two_theta)
                + Complex64::from_polar(0.25, -two_theta)
                + c(0.5, 0.0);
            assert!((z0 - expected).norm() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn state_rejects_bad_input() {
        assert!(matches!(
            StateVector::new(2, vec![Complex64::ONE; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StateVector::new(1, vec![c(0.9, 0.0), c(0.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::new(1, vec![c(f64::NAN, 0.0), c(0.0, 0.0)]),
            Err(Error::NonFiniteAmplitude(0))
        ));
        assert!(matches!(
            StateVector::basis_state(13, 0),
            Err(Error::SensorCountOutOfRange(13))
        ));
    }

    #[test]
    fn ensemble_prior_validation() {
        let s = StateVector::basis_state(1, 0).unwrap();
        assert!(Ensemble::new(vec![s.clone(), s.clone()], vec![0.6, 0.6]).is_err());
        assert!(Ensemble::new(vec![s.clone(), s.clone()], vec![1.2, -0.2]).is_err());
        assert!(Ensemble::new(vec![s.clone(), s], vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let psi = StateVector::renormalized(2, vec![c(0.1, 0.2), c(0.3, 0.4), c(0.5, 0.6), c(0.7, 0.8)]);
        let json = serde_json::to_string(&psi).unwrap();
        let back: StateVector = serde_json::from_str(&json).unwrap();
        assert_eq!(psi, back);

        let bad = r#"{"n": 1, "amps": [[0.5, 0.0], [0.0, 0.0]]}"#;
        let err = serde_json::from_str::<StateVector>(bad).unwrap_err();
        assert!(err.to_string().contains("norm deviates"));
    }

    #[test]
    fn density_operator_from_pure_validates() {
        let psi = StateVector::renormalized(2, vec![c(0.4, 0.1), c(0.0, 0.3), c(0.2, 0.0), c(0.5, 0.5)]);
        let rho = DensityOperator::from_pure(&psi);
        rho.validate().unwrap();
        assert_eq!(rho.dim(), 4);
    }
}
