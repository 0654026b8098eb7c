//! `sweep`: a (budget × threshold) grid of independent learning trials.
//!
//! Every trial's seed is derived from its grid position, so the report is
//! identical whether cells run serially or across worker threads, and two
//! runs with the same config produce byte-identical CSV. Wall-clock timing
//! is off by default for the same reason; `--timing` turns it on at the
//! cost of that byte stability. `HALFLEARN_WORKERS` sets the worker count
//! and is the only environment variable the program reads.

use std::env;
use std::error::Error;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use halflearn::learner::{testable_learn, Hypothesis, LearnVerdict, MIN_SAMPLE};
use halflearn::seeding::{derive, role};
use halflearn::synth::generate;
use halflearn::LearnConfig;

use crate::config::ExperimentConfig;
use crate::report::{median, CellSummary, Summary, TrialRow, CSV_HEADER};

pub fn run(cfg: &ExperimentConfig, timing: bool) -> Result<i32, Box<dyn Error>> {
    if cfg.trials == 0 {
        return Err("trials must be positive".into());
    }
    if cfg.n < MIN_SAMPLE {
        return Err(format!("n = {} is below the learner's minimum of {MIN_SAMPLE}", cfg.n).into());
    }
    cfg.learn_config()?;
    for &t in &cfg.thresholds {
        cfg.truth(t)?;
    }
    for &b in &cfg.budgets {
        cfg.noise(b)?;
    }
    let workers = worker_count()?;

    let cells: Vec<(f64, f64)> = cfg
        .budgets
        .iter()
        .flat_map(|&b| cfg.thresholds.iter().map(move |&t| (b, t)))
        .collect();
    let jobs = cells.len() * cfg.trials;

    let mut rows: Vec<Option<TrialRow>> = vec![None; jobs];
    if workers <= 1 {
        for job in 0..jobs {
            rows[job] = Some(run_job(cfg, &cells, job, timing)?);
        }
    } else {
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let cells = &cells;
                    scope.spawn(move || -> Result<Vec<(usize, TrialRow)>, String> {
                        let mut out = Vec::new();
                        for job in (w..jobs).step_by(workers) {
                            let row = run_job(cfg, cells, job, timing).map_err(|e| e.to_string())?;
                            out.push((job, row));
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect::<Vec<_>>()
        });
        for r in results {
            for (job, row) in r? {
                rows[job] = Some(row);
            }
        }
    }
    let rows: Vec<TrialRow> = rows.into_iter().map(|r| r.expect("job ran")).collect();

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }

    let mut cell_summaries = Vec::with_capacity(cells.len());
    let mut ratios = Vec::new();
    for (ci, &(budget, t_star)) in cells.iter().enumerate() {
        let cell_rows = &rows[ci * cfg.trials..(ci + 1) * cfg.trials];
        let errors: Vec<f64> = cell_rows.iter().filter_map(|r| r.error).collect();
        if budget > 0.0 {
            ratios.extend(errors.iter().map(|e| e / budget.sqrt()));
        }
        cell_summaries.push(CellSummary {
            budget,
            t_star,
            trials: cfg.trials,
            accepted: errors.len(),
            median_error: median(&errors),
        });
    }
    let summary = Summary {
        schema: "halflearn-sweep/1",
        d: cfg.d,
        n: cfg.n,
        epsilon: cfg.epsilon,
        tau: cfg.tau,
        seed: cfg.seed,
        marginal: cfg.marginal_label(),
        adversary: cfg.adversary_label().to_string(),
        trials_per_cell: cfg.trials,
        cells: cell_summaries,
        c_hat: median(&ratios),
    };

    let base = cfg.out.clone().unwrap_or_else(|| PathBuf::from("sweep"));
    let csv_path = PathBuf::from(format!("{}.csv", base.display()));
    let json_path = PathBuf::from(format!("{}.json", base.display()));
    fs::write(&csv_path, &csv)?;
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(&json_path, json)?;

    let accepted: usize = summary.cells.iter().map(|c| c.accepted).sum();
    println!(
        "{} cells x {} trials: {accepted}/{jobs} accepted",
        cells.len(),
        cfg.trials
    );
    for c in &summary.cells {
        match c.median_error {
            Some(m) => println!(
                "  budget {:<7} t* {:<5} accepted {:>2}/{}  median error {m:.4}",
                c.budget, c.t_star, c.accepted, c.trials
            ),
            None => println!(
                "  budget {:<7} t* {:<5} accepted {:>2}/{}  (no accepted trials)",
                c.budget, c.t_star, c.accepted, c.trials
            ),
        }
    }
    if let Some(c_hat) = summary.c_hat {
        println!("c_hat (error / sqrt(budget), noisy cells) = {c_hat:.3}");
    }
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(0)
}

fn run_job(
    cfg: &ExperimentConfig,
    cells: &[(f64, f64)],
    job: usize,
    timing: bool,
) -> Result<TrialRow, Box<dyn Error>> {
    let cell = job / cfg.trials;
    let trial = job % cfg.trials;
    let (budget, t_star) = cells[cell];
    let seed = derive(derive(cfg.seed, role::CELL, cell as u64), role::TRIAL, trial as u64);

    let start = Instant::now();
    let truth = cfg.truth(t_star)?;
    let g = generate(cfg.d, cfg.n, cfg.marginal, &truth, cfg.noise(budget)?, seed)?;
    let lc = LearnConfig {
        seed,
        ..cfg.learn_config()?
    };
    let outcome = testable_learn(&g.data, &lc).map_err(|e| {
        format!("cell (budget {budget}, t* {t_star}) trial {trial}: {e}")
    })?;
    let seconds = if timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };

    Ok(match outcome.verdict {
        LearnVerdict::Accept(acc) => TrialRow {
            budget,
            t_star,
            trial,
            verdict: "accept",
            threshold: Some(match &acc.chosen {
                Hypothesis::Halfspace(h) => h.threshold(),
                Hypothesis::Constant(c) => {
                    if *c > 0 {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                }
            }),
            error: Some(acc.test_error),
            seconds,
        },
        LearnVerdict::Reject(_) => TrialRow {
            budget,
            t_star,
            trial,
            verdict: "reject",
            threshold: None,
            error: None,
            seconds,
        },
    })
}

fn worker_count() -> Result<usize, Box<dyn Error>> {
    match env::var("HALFLEARN_WORKERS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(format!("HALFLEARN_WORKERS must be a positive integer, got {v:?}").into()),
        },
        Err(env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(format!("HALFLEARN_WORKERS: {e}").into()),
    }
}
