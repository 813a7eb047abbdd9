//! Hill climbing: per element, four neighbors; move to the best neighbor
//! that beats the best objective seen so far. The step size decays each
//! outer iteration.

use super::{find_neighbor, RunContext, RunOutcome, SearchConfig};
use crate::error::Result;
use crate::qstate::StateVector;

pub(crate) fn run(n: usize, cfg: &SearchConfig, ctx: &mut RunContext) -> Result<RunOutcome> {
    let dim = 1usize << n;
    let (mut x, mut best) = ctx.initial_candidate(n)?;
    let mut trajectory = vec![ctx.trajectory_point(0, best, &x)];
    let mut step = cfg.step_size_init;
    let mut iteration = 0usize;

    loop {
        iteration += 1;
        let best_at_start = best;
        for element in 0..dim {
            let neighbors: Vec<StateVector> = (0..cfg.neighbors_per_element)
                .map(|_| find_neighbor(&x, element, step, &mut ctx.rng))
                .collect();
            // Strict improvement over the running best; ties keep the lowest
            // neighbor index.
            let mut chosen: Option<(usize, f64)> = None;
            for (j, candidate) in neighbors.iter().enumerate() {
                match ctx.evaluate(candidate) {
                    Ok(objective) => {
                        if objective < best && chosen.is_none_or(|(_, b)| objective < b) {
                            chosen = Some((j, objective));
                        }
                    }
                    Err(_) => ctx.discarded += 1,
                }
            }
            if let Some((j, objective)) = chosen {
                x = neighbors[j].clone();
                best = objective;
            }
        }
        step *= cfg.step_decrease_rate;
        trajectory.push(ctx.trajectory_point(iteration, best, &x));
        let improvement = best_at_start - best;
        if iteration >= cfg.min_iterations && improvement < cfg.improvement_threshold {
            break;
        }
    }

    Ok(RunOutcome {
        trajectory,
        final_state: x,
        final_p_error: best,
        iterations: iteration,
    })
}
