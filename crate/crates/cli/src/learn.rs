//! `learn`: run the confidence-boosted learner on a dataset file.
//!
//! The file is treated as one big sample and dealt out across the boosting
//! trials plus the two final selection draws. Exit code 0 means the data
//! was accepted and a hypothesis printed, 2 means the testers rejected it;
//! unreadable or undersized input is a plain error (exit 1).

use std::error::Error;
use std::path::Path;

use halflearn::learner::{
    boost_trial_count, boosted_learn, selection_sample_size, Hypothesis, LearnVerdict,
    SliceSource, MIN_SAMPLE,
};
use halflearn::synth::read_dataset;
use halflearn::Diagnostic;

use crate::config::ExperimentConfig;

pub fn run(path: &Path, cfg: &ExperimentConfig) -> Result<i32, Box<dyn Error>> {
    let data = read_dataset(path)?;
    let lc = cfg.learn_config()?;

    let trials = boost_trial_count(lc.tau);
    let per_draw = selection_sample_size(data.dim(), lc.epsilon, lc.tau);
    let n_trial = data.len().saturating_sub(2 * per_draw) / trials;
    if n_trial < MIN_SAMPLE {
        return Err(format!(
            "dataset {} has {} points; boosting at epsilon = {}, tau = {} needs at least {} \
             ({} trials of {} points plus two selection draws of {} each)",
            path.display(),
            data.len(),
            lc.epsilon,
            lc.tau,
            trials * MIN_SAMPLE + 2 * per_draw,
            trials,
            MIN_SAMPLE,
            per_draw
        )
        .into());
    }

    let mut source = SliceSource::new(&data);
    let outcome = boosted_learn(&mut source, n_trial, &lc)?;

    match &outcome.verdict {
        LearnVerdict::Accept(acc) => {
            println!("verdict: accept");
            match &acc.chosen {
                Hypothesis::Halfspace(h) => {
                    println!("hypothesis: halfspace");
                    let coords: Vec<String> =
                        h.direction().iter().map(|c| format!("{c:.6}")).collect();
                    println!("  direction: [{}]", coords.join(", "));
                    println!("  threshold: {:.6}", h.threshold());
                }
                Hypothesis::Constant(c) => {
                    println!("hypothesis: constant {}", if *c > 0 { "+1" } else { "-1" });
                }
            }
            println!("holdout error: {:.4}", acc.test_error);
            println!(
                "trials: {} run, {} accepted",
                trials, acc.hypotheses_considered
            );
            print_diagnostics(&outcome.skipped);
            Ok(0)
        }
        LearnVerdict::Reject(diag) => {
            println!("verdict: reject");
            println!("cause {}: {}", diag.check, diag.message);
            print_diagnostics(&outcome.skipped);
            Ok(2)
        }
    }
}

fn print_diagnostics(skipped: &[Diagnostic]) {
    if skipped.is_empty() {
        println!("diagnostics: none");
    } else {
        println!("diagnostics:");
        for d in skipped {
            println!("  {}: {}", d.check, d.message);
        }
    }
}
