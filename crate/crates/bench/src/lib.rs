//! Shared fixtures for the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use iso_core::{Ensemble, SensorUnitary, StateVector};

pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateVector::random(n, &mut rng).expect("valid sensor count")
}

/// Final-state ensemble of a random initial state.
pub fn final_ensemble(n: usize, theta_deg: f64, seed: u64) -> Ensemble {
    let u = SensorUnitary::new(theta_deg).expect("theta in range");
    random_state(n, seed)
        .final_states(&u)
        .expect("final states")
}
