//! The `sweep` command: run every `(n, θ, method, seed)` cell in a worker
//! pool, then write `sweep.csv`, `summary.json` and optional per-n charts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use crate::cells::{run_cell, CellRow, FailureKind};
use crate::errors::{CliError, CliResult, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VALIDATION};
use crate::spec::SweepSpec;
use crate::svg::{write_line_chart, Series};

pub fn cmd_sweep(spec: &SweepSpec) -> CliResult<i32> {
    spec.validate()?;
    fs::create_dir_all(&spec.output_dir)?;

    let cells = spec.cells();
    let pool = build_pool()?;
    let rows: Vec<CellRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| run_cell(spec, cell))
            .collect()
    });

    write_csv(&spec.output_dir.join("sweep.csv"), &rows)?;
    write_summary(spec, &rows)?;
    if spec.svg {
        write_charts(spec, &rows)?;
    }

    let mut code = EXIT_OK;
    for row in &rows {
        match row.failure {
            Some(FailureKind::Validation) => {
                code = EXIT_VALIDATION;
                break;
            }
            Some(FailureKind::NonConvergence) => code = EXIT_NONCONVERGENCE,
            None => {}
        }
    }
    let failed = rows.iter().filter(|r| r.failure.is_some()).count();
    eprintln!(
        "sweep: {} cells, {} failed -> {}",
        rows.len(),
        failed,
        spec.output_dir.display()
    );
    Ok(code)
}

/// Worker pool honoring the `ISO_THREADS` cap.
pub fn build_pool() -> CliResult<rayon::ThreadPool> {
    let threads = std::env::var("ISO_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn write_csv(path: &Path, rows: &[CellRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "n",
        "theta_deg",
        "method",
        "measurement",
        "seed",
        "p_value",
        "iterations",
        "converged",
        "config_hash",
        "wall_time_s",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.theta_deg.to_string(),
            r.method.to_string(),
            r.measurement.to_string(),
            r.seed.to_string(),
            r.p_value.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            r.config_hash.clone(),
            r.wall_time_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_summary(spec: &SweepSpec, rows: &[CellRow]) -> CliResult<()> {
    let mut groups: BTreeMap<(usize, &str), Vec<&CellRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.n, r.method)).or_default().push(r);
    }
    let group_stats: Vec<_> = groups
        .iter()
        .map(|(&(n, method), members)| {
            let ok: Vec<f64> = members
                .iter()
                .filter(|r| r.failure.is_none())
                .map(|r| r.p_value)
                .collect();
            let mean = if ok.is_empty() {
                f64::NAN
            } else {
                ok.iter().sum::<f64>() / ok.len() as f64
            };
            json!({
                "n": n,
                "method": method,
                "cells": members.len(),
                "converged": ok.len(),
                "mean_p": mean,
                "min_p": ok.iter().copied().fold(f64::NAN, f64::min),
                "max_p": ok.iter().copied().fold(f64::NAN, f64::max),
            })
        })
        .collect();
    let failures: Vec<_> = rows
        .iter()
        .filter(|r| r.failure.is_some())
        .map(|r| {
            json!({
                "n": r.n,
                "theta_deg": r.theta_deg,
                "method": r.method,
                "seed": r.seed,
                "converged": r.converged,
                "error": r.error,
            })
        })
        .collect();
    let summary = json!({
        "spec": spec,
        "cells": rows.len(),
        "failed": failures.len(),
        "groups": group_stats,
        "failures": failures,
    });
    fs::write(
        spec.output_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    )?;
    Ok(())
}

fn write_charts(spec: &SweepSpec, rows: &[CellRow]) -> CliResult<()> {
    for &n in &spec.n_values {
        // Mean over seeds per (method, θ).
        let mut per_method: BTreeMap<&str, BTreeMap<u64, (f64, usize)>> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.n == n && r.failure.is_none()) {
            let slot = per_method
                .entry(r.method)
                .or_default()
                .entry(r.theta_deg.to_bits())
                .or_insert((0.0, 0));
            slot.0 += r.p_value;
            slot.1 += 1;
        }
        let series: Vec<Series> = per_method
            .into_iter()
            .map(|(method, by_theta)| {
                let mut points: Vec<(f64, f64)> = by_theta
                    .into_iter()
                    .map(|(bits, (sum, count))| (f64::from_bits(bits), sum / count as f64))
                    .collect();
                points.sort_by(|a, b| a.0.total_cmp(&b.0));
                Series {
                    label: method.to_string(),
                    points,
                }
            })
            .collect();
        if series.iter().all(|s| s.points.is_empty()) {
            continue;
        }
        let label = match spec.measurement {
            crate::spec::Measurement::MinError => "probability of error",
            crate::spec::Measurement::Unambiguous => "probability of failure",
        };
        write_line_chart(
            &spec.output_dir.join(format!("sweep_n{n}.svg")),
            &format!("n = {n} sensors"),
            "theta (degrees)",
            label,
            &series,
        )?;
    }
    Ok(())
}
