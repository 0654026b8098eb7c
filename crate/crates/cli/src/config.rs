//! Experiment configuration: defaults for every knob, `key=value` file
//! parsing, and flag overrides layered on top.
//!
//! Files are line oriented: blank lines and lines starting with `#` are
//! skipped, everything else must be `key=value`. Unknown keys are hard
//! errors so a typo cannot silently fall back to a default.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use halflearn::synth::{MarginalKind, NoiseProfile, NoiseStrategy};
use halflearn::{Halfspace, LearnConfig};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: String) -> Result<T, ConfigError> {
    Err(ConfigError(msg))
}

/// Truth direction: a coordinate axis or an explicit vector.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectionSpec {
    Axis(usize),
    Vector(Vec<f64>),
}

/// One experiment description shared by `gen`, `learn`, and `sweep`.
///
/// `threshold` entries are boundary offsets: the truth labels a point +1
/// exactly when its projection on the direction is at least the offset.
/// `budget` and `threshold` hold one value for single runs and become the
/// grid axes for `sweep`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub seed: u64,
    pub marginal: MarginalKind,
    pub direction: DirectionSpec,
    pub thresholds: Vec<f64>,
    pub adversary: NoiseStrategy,
    pub budgets: Vec<f64>,
    pub trials: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 5,
            n: 100_000,
            epsilon: 0.05,
            tau: 0.05,
            seed: 1,
            marginal: MarginalKind::StandardGaussian,
            direction: DirectionSpec::Axis(0),
            thresholds: vec![0.0],
            adversary: NoiseStrategy::TailFlip,
            budgets: vec![0.0],
            trials: 20,
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Reads a config file and applies every line, reporting the offending
    /// line number on failure.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    idx + 1
                ));
            };
            self.set(key.trim(), value.trim())
                .map_err(|e| ConfigError(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        }
        Ok(())
    }

    /// Sets one key. Later assignments of the same key win.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "d" => self.d = parse_int(key, value)?,
            "n" => self.n = parse_int(key, value)?,
            "epsilon" => self.epsilon = parse_float(key, value)?,
            "tau" => self.tau = parse_float(key, value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| ConfigError(format!("seed: expected an integer, got {value:?}")))?
            }
            "marginal" => self.marginal = parse_marginal(value)?,
            "direction" => self.direction = parse_direction(value)?,
            "threshold" => self.thresholds = parse_float_list(key, value)?,
            "adversary" => self.adversary = parse_adversary(value)?,
            "budget" => self.budgets = parse_float_list(key, value)?,
            "trials" => self.trials = parse_int(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    /// Applies `(key, value)` pairs coming from command-line flags.
    pub fn apply_overrides(
        &mut self,
        pairs: &[(&str, &Option<String>)],
    ) -> Result<(), ConfigError> {
        for (key, value) in pairs {
            if let Some(v) = value {
                self.set(key, v)
                    .map_err(|e| ConfigError(format!("--{key}: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn single_budget(&self) -> Result<f64, ConfigError> {
        match self.budgets[..] {
            [b] => Ok(b),
            _ => err(format!(
                "this command takes a single budget, got {} values",
                self.budgets.len()
            )),
        }
    }

    pub fn single_threshold(&self) -> Result<f64, ConfigError> {
        match self.thresholds[..] {
            [t] => Ok(t),
            _ => err(format!(
                "this command takes a single threshold, got {} values",
                self.thresholds.len()
            )),
        }
    }

    /// The truth halfspace whose boundary sits at `t_star` along the
    /// configured direction.
    pub fn truth(&self, t_star: f64) -> Result<Halfspace, ConfigError> {
        match &self.direction {
            DirectionSpec::Axis(k) => {
                if *k >= self.d {
                    return err(format!("direction axis {k} is out of range for d = {}", self.d));
                }
                Ok(Halfspace::axis(self.d, *k, -t_star))
            }
            DirectionSpec::Vector(v) => {
                if v.len() != self.d {
                    return err(format!(
                        "direction vector has {} coordinates but d = {}",
                        v.len(),
                        self.d
                    ));
                }
                Halfspace::new(v, -t_star).map_err(|e| ConfigError(format!("direction: {e}")))
            }
        }
    }

    pub fn noise(&self, budget: f64) -> Result<NoiseProfile, ConfigError> {
        NoiseProfile::new(budget, self.adversary).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn learn_config(&self) -> Result<LearnConfig, ConfigError> {
        LearnConfig::new(self.epsilon, self.tau, self.seed)
            .map_err(|e| ConfigError(e.to_string()))
    }

    pub fn marginal_label(&self) -> String {
        match self.marginal {
            MarginalKind::StandardGaussian => "gaussian".to_string(),
            MarginalKind::ScaledGaussian(f) => format!("scaled:{f}"),
            MarginalKind::TwoPointMixture(s) => format!("mixture:{s}"),
            MarginalKind::UniformCube(h) => format!("cube:{h}"),
        }
    }

    pub fn adversary_label(&self) -> &'static str {
        match self.adversary {
            NoiseStrategy::BoundaryFlip => "boundary",
            NoiseStrategy::TailFlip => "tail",
            NoiseStrategy::RandomFlip => "random",
        }
    }
}

fn parse_int(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: expected a nonnegative integer, got {value:?}")))
}

fn parse_float(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: expected a number, got {value:?}")))
}

fn parse_float_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Result<Vec<f64>, _> = value.split(',').map(|s| s.trim().parse()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => err(format!(
            "{key}: expected a comma-separated list of numbers, got {value:?}"
        )),
    }
}

fn parse_marginal(value: &str) -> Result<MarginalKind, ConfigError> {
    if value == "gaussian" {
        return Ok(MarginalKind::StandardGaussian);
    }
    let Some((kind, param)) = value.split_once(':') else {
        return err(format!(
            "marginal: expected gaussian, scaled:<factor>, mixture:<separation>, \
             or cube:<halfwidth>, got {value:?}"
        ));
    };
    let p: f64 = param.parse().map_err(|_| {
        ConfigError(format!("marginal: parameter {param:?} is not a number"))
    })?;
    if !(p.is_finite() && p > 0.0) {
        return err(format!("marginal: parameter must be positive, got {p}"));
    }
    match kind {
        "scaled" => Ok(MarginalKind::ScaledGaussian(p)),
        "mixture" => Ok(MarginalKind::TwoPointMixture(p)),
        "cube" => Ok(MarginalKind::UniformCube(p)),
        _ => err(format!("marginal: unknown kind {kind:?}")),
    }
}

fn parse_adversary(value: &str) -> Result<NoiseStrategy, ConfigError> {
    match value {
        "boundary" => Ok(NoiseStrategy::BoundaryFlip),
        "tail" => Ok(NoiseStrategy::TailFlip),
        "random" => Ok(NoiseStrategy::RandomFlip),
        _ => err(format!(
            "adversary: expected boundary, tail, or random, got {value:?}"
        )),
    }
}

fn parse_direction(value: &str) -> Result<DirectionSpec, ConfigError> {
    match value.split_once(':') {
        Some(("axis", k)) => k
            .parse()
            .map(DirectionSpec::Axis)
            .map_err(|_| ConfigError(format!("direction: axis index {k:?} is not an integer"))),
        Some(("vec", coords)) => {
            let v = parse_float_list("direction", coords)?;
            Ok(DirectionSpec::Vector(v))
        }
        _ => err(format!(
            "direction: expected axis:<index> or vec:<c1,c2,...>, got {value:?}"
        )),
    }
}
