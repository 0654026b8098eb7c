//! `gen`: write a synthetic labeled dataset to a file.

use std::error::Error;
use std::path::PathBuf;

use halflearn::synth::{generate, write_dataset};

use crate::config::ExperimentConfig;

pub fn run(cfg: &ExperimentConfig) -> Result<i32, Box<dyn Error>> {
    if cfg.n == 0 {
        return Err("n must be positive".into());
    }
    let budget = cfg.single_budget()?;
    let t_star = cfg.single_threshold()?;
    let truth = cfg.truth(t_star)?;
    let noise = cfg.noise(budget)?;
    let g = generate(cfg.d, cfg.n, cfg.marginal, &truth, noise, cfg.seed)?;

    let out = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("dataset.txt"));
    write_dataset(&g.data, &out)?;

    let n = g.data.len();
    let plus = g.data.iter().filter(|&(_, y)| y > 0).count();
    println!("wrote {} ({} points, d = {})", out.display(), n, g.data.dim());
    println!(
        "realized opt {:.3} ({} of {} requested flips applied)",
        g.realized_noise(),
        g.realized_flips,
        g.requested_flips
    );
    println!(
        "label mass: +1 {:.4}, -1 {:.4}",
        plus as f64 / n as f64,
        (n - plus) as f64 / n as f64
    );
    Ok(0)
}
