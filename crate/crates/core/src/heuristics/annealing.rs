//! Simulated annealing with the adaptive cooling schedule
//! `T ← min(T·rate, σ·rateⁿ)`, where `σ` is the standard deviation of the
//! latest ten neighbor objectives. Worsening moves are accepted with
//! probability `e^{−ΔE/T}`.

use std::collections::VecDeque;

use rand::Rng;

use super::{find_neighbor, std_deviation, RunContext, RunOutcome, SearchConfig};
use crate::error::Result;

/// Floor keeping the acceptance rule defined when the probe objectives tie.
const MIN_TEMPERATURE: f64 = 1e-12;

/// Window length for the neighbor-objective deviation.
const SIGMA_WINDOW: usize = 10;

pub(crate) fn run(n: usize, cfg: &SearchConfig, ctx: &mut RunContext) -> Result<RunOutcome> {
    let dim = 1usize << n;
    let (mut x, mut current) = ctx.initial_candidate(n)?;

    // Initial temperature: deviation of ten probe neighbors of the start.
    let mut probe = Vec::with_capacity(SIGMA_WINDOW);
    for k in 0..SIGMA_WINDOW {
        let candidate = find_neighbor(&x, k % dim, cfg.step_size_init, &mut ctx.rng);
        match ctx.evaluate(&candidate) {
            Ok(p) => probe.push(p),
            Err(_) => ctx.discarded += 1,
        }
    }
    let mut temperature = std_deviation(&probe).max(MIN_TEMPERATURE);
    let mut sigma_ratio = 1.0f64;
    let mut window: VecDeque<f64> = probe.into_iter().collect();

    let mut best = current;
    let mut best_state = x.clone();
    let mut trajectory = vec![ctx.trajectory_point(0, current, &x)];
    let mut step = cfg.step_size_init;
    let mut iteration = 0usize;
    let mut stalled = 0usize;

    loop {
        iteration += 1;
        let best_at_start = best;
        for element in 0..dim {
            for _ in 0..cfg.neighbors_per_element {
                let candidate = find_neighbor(&x, element, step, &mut ctx.rng);
                let energy = match ctx.evaluate(&candidate) {
                    Ok(p) => p,
                    Err(_) => {
                        ctx.discarded += 1;
                        continue;
                    }
                };
                window.push_back(energy);
                if window.len() > SIGMA_WINDOW {
                    window.pop_front();
                }
                let delta = energy - current;
                let accept = if delta < 0.0 {
                    true
                } else {
                    let probability = if temperature > 0.0 {
                        (-delta / temperature).exp()
                    } else {
                        0.0
                    };
                    ctx.rng.random::<f64>() < probability
                };
                if accept {
                    x = candidate;
                    current = energy;
                    if current < best {
                        best = current;
                        best_state = x.clone();
                    }
                }
            }
        }
        step *= cfg.step_decrease_rate;
        let sigma = std_deviation(window.make_contiguous());
        sigma_ratio *= cfg.cooling_rate;
        temperature = (temperature * cfg.cooling_rate).min(sigma * sigma_ratio);
        trajectory.push(ctx.trajectory_point(iteration, current, &x));

        if best_at_start - best < cfg.improvement_threshold {
            stalled += 1;
        } else {
            stalled = 0;
        }
        if iteration >= cfg.min_iterations && stalled >= cfg.sa_patience {
            break;
        }
    }

    Ok(RunOutcome {
        trajectory,
        final_state: best_state,
        final_p_error: best,
        iterations: iteration,
    })
}
