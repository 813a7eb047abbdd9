//! Genetic algorithm: fitness `1 − P`, linear rank selection, two-point
//! crossover on the amplitude vector with renormalization, neighbor-style
//! mutation whose step decays like the other heuristics' step size, and
//! elitist survivor selection over parents plus children.

use num_complex::Complex64;
use rand::Rng;

use super::{RunContext, RunOutcome, SearchConfig};
use crate::error::Result;
use crate::qstate::StateVector;

struct Individual {
    state: StateVector,
    fitness: f64,
}

pub(crate) fn run(n: usize, cfg: &SearchConfig, ctx: &mut RunContext) -> Result<RunOutcome> {
    let size = cfg.ga_population;
    let mut population = Vec::with_capacity(size);
    let mut attempts = 0usize;
    while population.len() < size {
        attempts += 1;
        let state = StateVector::random(n, &mut ctx.rng)?;
        match ctx.evaluate(&state) {
            Ok(p) => population.push(Individual {
                state,
                fitness: 1.0 - p,
            }),
            Err(e) => {
                ctx.discarded += 1;
                if attempts > size * 10 {
                    return Err(e);
                }
            }
        }
    }
    sort_descending(&mut population);

    let mut best_fitness = population[0].fitness;
    let mut trajectory = vec![ctx.trajectory_point(0, 1.0 - best_fitness, &population[0].state)];
    let mut generation = 0usize;
    let mut mutation_step = cfg.step_size_init;

    loop {
        generation += 1;
        // population stays sorted best-first, so rank weight N−index.
        let total_weight = size * (size + 1) / 2;
        let mut children = Vec::with_capacity(size);
        while children.len() < size {
            let pa = rank_select(size, total_weight, &mut ctx.rng);
            let pb = rank_select(size, total_weight, &mut ctx.rng);
            let (c1, c2) = two_point_crossover(
                &population[pa].state,
                &population[pb].state,
                &mut ctx.rng,
            );
            children.push(mutate(c1, mutation_step, cfg, ctx));
            children.push(mutate(c2, mutation_step, cfg, ctx));
        }
        for child in children {
            match ctx.evaluate(&child) {
                Ok(p) => population.push(Individual {
                    state: child,
                    fitness: 1.0 - p,
                }),
                Err(_) => ctx.discarded += 1,
            }
        }
        // Elitist survivor selection: the top N of parents plus children.
        sort_descending(&mut population);
        population.truncate(size);

        let new_best = population[0].fitness;
        trajectory.push(ctx.trajectory_point(
            generation,
            1.0 - new_best,
            &population[0].state,
        ));
        mutation_step *= cfg.step_decrease_rate;
        let improvement = new_best - best_fitness;
        best_fitness = new_best;
        if generation >= cfg.min_iterations && improvement < cfg.improvement_threshold {
            break;
        }
    }

    let best = &population[0];
    Ok(RunOutcome {
        trajectory,
        final_state: best.state.clone(),
        final_p_error: 1.0 - best.fitness,
        iterations: generation,
    })
}

fn sort_descending(population: &mut [Individual]) {
    population.sort_by(|a, b| b.fitness.partial_cmp(&a.fitness).expect("finite fitness"));
}

/// Linear rank selection on a best-first-sorted population: index `i`
/// carries weight `N − i`.
fn rank_select<R: Rng + ?Sized>(size: usize, total_weight: usize, rng: &mut R) -> usize {
    let draw = rng.random_range(0..total_weight);
    let mut acc = 0usize;
    for i in 0..size {
        acc += size - i;
        if draw < acc {
            return i;
        }
    }
    size - 1
}

/// Swaps the amplitude segment between two random cut points and
/// renormalizes both children. A degenerate zero-norm child falls back to
/// its parent.
fn two_point_crossover<R: Rng + ?Sized>(
    a: &StateVector,
    b: &StateVector,
    rng: &mut R,
) -> (StateVector, StateVector) {
    let dim = a.dim();
    let cut_a = rng.random_range(0..=dim);
    let cut_b = rng.random_range(0..=dim);
    let (lo, hi) = if cut_a <= cut_b {
        (cut_a, cut_b)
    } else {
        (cut_b, cut_a)
    };
    let mut amps_1 = a.amps().to_vec();
    let mut amps_2 = b.amps().to_vec();
    for j in lo..hi {
        std::mem::swap(&mut amps_1[j], &mut amps_2[j]);
    }
    let child = |amps: Vec<Complex64>, parent: &StateVector| {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 1e-18 {
            StateVector::renormalized(parent.n_sensors(), amps)
        } else {
            parent.clone()
        }
    };
    (child(amps_1, a), child(amps_2, b))
}

/// Per-element neighbor-style perturbation fired with the mutation rate,
/// followed by one renormalization.
fn mutate(
    state: StateVector,
    step: f64,
    cfg: &SearchConfig,
    ctx: &mut RunContext,
) -> StateVector {
    let mut amps = state.amps().to_vec();
    let mut changed = false;
    for amp in amps.iter_mut() {
        if ctx.rng.random::<f64>() < cfg.ga_mutation_rate {
            let angle = ctx.rng.random::<f64>() * std::f64::consts::TAU;
            *amp += Complex64::from_polar(step, angle);
            changed = true;
        }
    }
    if changed {
        StateVector::renormalized(state.n_sensors(), amps)
    } else {
        state
    }
}
