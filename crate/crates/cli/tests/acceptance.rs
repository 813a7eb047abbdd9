//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (visible under `cargo test -- --nocapture`).
//!
//! Criteria cover the threshold table, the zero-error band and its
//! converse, the two-sensor closed form, the n = 4 headline number, heuristic
//! dominance of the conjecture, the averaging property, the equal-overlap
//! error formula, the unambiguous scheme, and symmetry-index convergence.

use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use iso_core::{
    average_state, conjectured_optimum, genetic_search, gram_matrix, hill_climb,
    min_error_discriminate, objective_p, orthogonal_regime_state, permute_state, simulated_anneal,
    symmetric_error, symmetric_overlap_ensemble, threshold_deg, unambiguous_discriminate,
    SearchConfig, SensorPermutation, SensorUnitary, StateVector,
};

fn max_offdiag(ensemble: &iso_core::Ensemble) -> f64 {
    let g = gram_matrix(ensemble);
    let m = ensemble.n_states();
    let mut max = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            max = max.max(g[(i, j)].norm());
        }
    }
    max
}

/// Criterion 1: the `thresholds` command prints T = 60.0 (n=3,4),
/// 65.9 (n=5,6), 69.3 (n=7,8), 71.6 (n=9,10), each within 0.05°, in < 1 s.
#[test]
fn criterion_01_threshold_table() {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_iso"))
        .args(["thresholds", "--max-n", "10"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let expected = [
        (3usize, 60.0f64),
        (4, 60.0),
        (5, 65.9),
        (6, 65.9),
        (7, 69.3),
        (8, 69.3),
        (9, 71.6),
        (10, 71.6),
    ];
    for (n, t_expected) in expected {
        let line = stdout
            .lines()
            .find(|l| l.split_whitespace().next() == Some(&n.to_string()))
            .unwrap_or_else(|| panic!("row for n = {n} missing in:\n{stdout}"));
        let t: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(
            (t - t_expected).abs() <= 0.05,
            "n = {n}: printed {t}, expected {t_expected} +- 0.05"
        );
    }
    assert!(elapsed < 1.0, "thresholds took {elapsed:.3} s");
    println!("criterion 01 (threshold table): PASS ({elapsed:.3} s)");
}

/// Criterion 2: inside [T, 180−T] the constructed state has Gram
/// off-diagonals below 1e-9 and certified error below 1e-6 (n = 3..5,
/// 10 θ samples each), in < 1 min.
#[test]
fn criterion_02_zero_error_regime() {
    let start = Instant::now();
    let mut worst_z = 0.0f64;
    let mut worst_p = 0.0f64;
    for n in 3..=5 {
        let t = threshold_deg(n).unwrap();
        for k in 0..10 {
            let theta = t + (180.0 - 2.0 * t) * k as f64 / 9.0;
            let sol = orthogonal_regime_state(n, theta).unwrap();
            let u = SensorUnitary::new(theta).unwrap();
            let ens = sol.state.final_states(&u).unwrap();
            let z = max_offdiag(&ens);
            assert!(z <= 1e-9, "n={n} θ={theta}: |z| = {z:.3e}");
            let res = min_error_discriminate(&ens, 1e-8).unwrap();
            assert!(res.converged);
            assert!(res.p_error <= 1e-6, "n={n} θ={theta}: p = {}", res.p_error);
            worst_z = worst_z.max(z);
            worst_p = worst_p.max(res.p_error);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0);
    println!(
        "criterion 02 (zero-error regime): PASS (max |z| = {worst_z:.2e}, max p = {worst_p:.2e}, {elapsed:.2} s)"
    );
}

/// Criterion 3: below threshold no state gets every pairwise overlap under
/// 1e-3 — 200 random states per (n, θ), θ ∈ {T−5°, T−1°}, n = 3..5,
/// in < 5 min.
#[test]
fn criterion_03_converse_witness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(314159);
    let mut smallest_witness = f64::INFINITY;
    for n in 3..=5 {
        let t = threshold_deg(n).unwrap();
        for offset in [5.0, 1.0] {
            let theta = t - offset;
            let u = SensorUnitary::new(theta).unwrap();
            for trial in 0..200 {
                let psi = StateVector::random(n, &mut rng).unwrap();
                let ens = psi.final_states(&u).unwrap();
                let z = max_offdiag(&ens);
                assert!(
                    z > 1e-3,
                    "n={n} θ={theta} trial={trial}: all overlaps below 1e-3 (max {z:.3e})"
                );
                smallest_witness = smallest_witness.min(z);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0);
    println!(
        "criterion 03 (converse witness): PASS (smallest max-overlap = {smallest_witness:.3e}, {elapsed:.2} s)"
    );
}

/// Criterion 4: hill climbing with the default configuration reaches the
/// two-sensor optimum ½(1 − sin 2θ) within 1e-3 at θ ∈ {10°, 20°, 30°, 40°},
/// in < 10 min.
#[test]
fn criterion_04_two_sensor_closed_form() {
    let start = Instant::now();
    let cfg = SearchConfig::default().with_seed(1);
    let mut worst = 0.0f64;
    for theta in [10.0f64, 20.0, 30.0, 40.0] {
        let target = 0.5 * (1.0 - (2.0 * theta.to_radians()).sin().abs());
        let u = SensorUnitary::new(theta).unwrap();
        let record = hill_climb(&u, 2, &cfg).unwrap();
        let diff = (record.final_p_error - target).abs();
        assert!(
            diff <= 1e-3,
            "θ={theta}: HC {} vs closed form {target}",
            record.final_p_error
        );
        worst = worst.max(diff);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0);
    println!(
        "criterion 04 (two-sensor closed form): PASS (max deviation = {worst:.2e}, {elapsed:.2} s)"
    );
}

/// Criterion 5: at n = 4, θ = 46° the conjectured optimum, HC and SA give
/// 0.0585 ± 0.001 and GA gives 0.0586 ± 0.001, in < 30 min.
#[test]
fn criterion_05_headline_number() {
    let start = Instant::now();
    let sol = conjectured_optimum(4, 46.0).unwrap();
    assert!(
        (sol.predicted_error - 0.0585).abs() <= 0.001,
        "conjecture predicted {}",
        sol.predicted_error
    );
    let u = SensorUnitary::new(46.0).unwrap();
    let cfg = SearchConfig::default().with_seed(1);
    let hc = hill_climb(&u, 4, &cfg).unwrap().final_p_error;
    let sa = simulated_anneal(&u, 4, &cfg).unwrap().final_p_error;
    let ga = genetic_search(&u, 4, &cfg).unwrap().final_p_error;
    assert!((hc - 0.0585).abs() <= 0.001, "HC ended at {hc}");
    assert!((sa - 0.0585).abs() <= 0.001, "SA ended at {sa}");
    assert!((ga - 0.0586).abs() <= 0.001, "GA ended at {ga}");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1800.0);
    println!(
        "criterion 05 (headline 5.85%): PASS (conjecture {:.6}, hc {hc:.6}, sa {sa:.6}, ga {ga:.6}, {elapsed:.1} s)",
        sol.predicted_error
    );
}

/// Criterion 6: on 8 θ points below T for n = 3 and 4, hill climbing never
/// undercuts the conjectured optimum by more than 1e-4, in < 30 min.
#[test]
fn criterion_06_heuristic_vs_conjecture_dominance() {
    let start = Instant::now();
    let cfg = SearchConfig::default().with_seed(2);
    let mut best_margin = f64::INFINITY;
    for n in [3usize, 4] {
        let t = threshold_deg(n).unwrap();
        for k in 1..=8 {
            let theta = t * k as f64 / 9.0;
            let predicted = conjectured_optimum(n, theta).unwrap().predicted_error;
            let u = SensorUnitary::new(theta).unwrap();
            let hc = hill_climb(&u, n, &cfg).unwrap().final_p_error;
            let margin = hc - predicted;
            assert!(
                margin >= -1e-4,
                "n={n} θ={theta:.3}: HC {hc} beat conjecture {predicted}"
            );
            best_margin = best_margin.min(margin);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1800.0);
    println!(
        "criterion 06 (dominance): PASS (smallest hc-conjecture margin = {best_margin:.2e}, {elapsed:.1} s)"
    );
}

/// Criterion 7: averaging a random n = 3 state with any renumbered copy
/// never raises the objective (20 trials, slack 1e-6), in < 10 min.
#[test]
fn criterion_07_averaging_experiment() {
    let start = Instant::now();
    let u = SensorUnitary::new(67.5).unwrap();
    let permutations: Vec<SensorPermutation> = SensorPermutation::enumerate(3)
        .unwrap()
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let mut worst_gain = f64::NEG_INFINITY;
    for trial in 0..20 {
        let psi = StateVector::random(3, &mut rng).unwrap();
        let p_original = objective_p(&psi, &u).unwrap();
        for perm in &permutations {
            let averaged =
                average_state(&psi, &permute_state(&psi, perm).unwrap()).unwrap();
            let p_avg = objective_p(&averaged, &u).unwrap();
            assert!(
                p_avg <= p_original + 1e-6,
                "trial {trial}: averaging raised P from {p_original} to {p_avg}"
            );
            worst_gain = worst_gain.max(p_avg - p_original);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0);
    println!(
        "criterion 07 (averaging): PASS (20/20 trials, worst averaged-minus-original = {worst_gain:.2e}, {elapsed:.2} s)"
    );
}

/// Criterion 8: the equal-overlap error formula matches the certified solver
/// within 1e-6 across n ∈ {2..5} × x ∈ {0.1, 0.3, 0.5, 0.7, 0.9}, and its
/// finite-difference monotonicity holds, in < 5 min.
#[test]
fn criterion_08_symmetric_error_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=5 {
        for step in 0..5 {
            let x = 0.1 + 0.2 * step as f64;
            let ens = symmetric_overlap_ensemble(n, x).unwrap();
            let res = min_error_discriminate(&ens, 1e-8).unwrap();
            assert!(res.converged);
            let formula = symmetric_error(n, x).unwrap();
            let diff = (res.p_error - formula).abs();
            assert!(
                diff <= 1e-6,
                "n={n} x={x}: solver {} vs formula {formula}",
                res.p_error
            );
            worst = worst.max(diff);
        }
    }
    // Finite-difference monotonicity at the contract's step and tolerance.
    let h = 1e-6;
    for n in 2..=6 {
        let mut x = h;
        while x < 1.0 - h {
            let d = (symmetric_error(n, x + h).unwrap() - symmetric_error(n, x - h).unwrap())
                / (2.0 * h);
            assert!(d >= -1e-4, "n={n} x={x}: slope {d}");
            x += 0.05;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0);
    println!(
        "criterion 08 (equal-overlap oracle): PASS (max |solver-formula| = {worst:.2e}, {elapsed:.2} s)"
    );
}

/// Criterion 9: unambiguous failure equals the common overlap x within 1e-5
/// on the symmetric ensembles and 0 within 1e-6 on orthogonal ones,
/// in < 5 min.
#[test]
fn criterion_09_unambiguous_scheme() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=5 {
        for step in 0..5 {
            let x = 0.1 + 0.2 * step as f64;
            let ens = symmetric_overlap_ensemble(n, x).unwrap();
            let res = unambiguous_discriminate(&ens, 1e-8).unwrap();
            assert!(res.converged);
            let diff = (res.p_failure - x).abs();
            assert!(diff <= 1e-5, "n={n} x={x}: failure {}", res.p_failure);
            worst = worst.max(diff);
        }
        let orthogonal = symmetric_overlap_ensemble(n, 0.0).unwrap();
        let res = unambiguous_discriminate(&orthogonal, 1e-8).unwrap();
        assert!(res.converged);
        assert!(
            res.p_failure <= 1e-6,
            "n={n} orthogonal: failure {}",
            res.p_failure
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0);
    println!(
        "criterion 09 (unambiguous scheme): PASS (max |failure-x| = {worst:.2e}, {elapsed:.2} s)"
    );
}

/// Criterion 10: hill climbing at n = 3, θ = 46° ends with symmetry index
/// ≤ 0.01 and a negative symmetry-index trend, in < 5 min.
#[test]
fn criterion_10_symmetry_index_convergence() {
    let start = Instant::now();
    let u = SensorUnitary::new(46.0).unwrap();
    let cfg = SearchConfig::default().with_seed(3);
    let record = hill_climb(&u, 3, &cfg).unwrap();
    let final_sym = record.trajectory.last().unwrap().symmetry_index;
    assert!(final_sym <= 0.01, "final symmetry index {final_sym}");

    let m = record.trajectory.len() as f64;
    let mean_x: f64 = record
        .trajectory
        .iter()
        .map(|p| p.iteration as f64)
        .sum::<f64>()
        / m;
    let mean_y: f64 = record
        .trajectory
        .iter()
        .map(|p| p.symmetry_index)
        .sum::<f64>()
        / m;
    let slope_num: f64 = record
        .trajectory
        .iter()
        .map(|p| (p.iteration as f64 - mean_x) * (p.symmetry_index - mean_y))
        .sum();
    let slope_den: f64 = record
        .trajectory
        .iter()
        .map(|p| (p.iteration as f64 - mean_x).powi(2))
        .sum();
    let slope = slope_num / slope_den;
    assert!(slope < 0.0, "symmetry-index slope {slope} not negative");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0);
    println!(
        "criterion 10 (symmetry-index convergence): PASS (final index {final_sym:.2e}, slope {slope:.2e}, {elapsed:.2} s)"
    );
}
