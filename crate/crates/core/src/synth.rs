//! Synthetic data with a known ground truth and a controlled adversary.
//!
//! `generate` draws points from a chosen marginal, labels them with a target
//! halfspace, and then hands the adversary an exact flip budget of
//! ⌊budget·n⌋ labels. The three strategies stress different parts of the
//! learner: `BoundaryFlip` corrupts the points closest to the separating
//! hyperplane (hard for direction estimation), `TailFlip` erases the deepest
//! minority-label points (hard for center finding), and `RandomFlip` is the
//! unstructured baseline.
//!
//! The non-Gaussian marginals are foils for the testers, each chosen to slip
//! past some checks and not others: `ScaledGaussian` fails the covariance
//! bound, `TwoPointMixture` fails the Kolmogorov and moment tests while its
//! covariance stays bounded, and `UniformCube` matches mean and covariance
//! exactly but has the wrong fourth moments.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::core::{Halfspace, LabeledDataset};
use crate::error::{Error, Result};
use crate::seeding::{self, role};

/// Marginal distribution of the feature vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalKind {
    /// N(0, I_d): the distribution the learner is promised.
    StandardGaussian,
    /// factor · N(0, I_d); inflated covariance.
    ScaledGaussian(f64),
    /// First coordinate ±separation with equal probability, remaining
    /// coordinates standard normal. Bounded covariance, wrong shape.
    TwoPointMixture(f64),
    /// Coordinates i.i.d. uniform on [−halfwidth, halfwidth]. With
    /// halfwidth √3 it matches Gaussian mean and covariance exactly.
    UniformCube(f64),
}

/// Label-corruption strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseStrategy {
    /// Flip the points with the smallest |margin|.
    BoundaryFlip,
    /// Flip minority-label points, deepest (largest |margin|) first.
    TailFlip,
    /// Flip a uniformly random subset.
    RandomFlip,
}

/// An adversary: a strategy plus a corruption budget in [0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseProfile {
    pub budget: f64,
    pub strategy: NoiseStrategy,
}

impl NoiseProfile {
    pub fn new(budget: f64, strategy: NoiseStrategy) -> Result<Self> {
        if !(0.0..0.5).contains(&budget) {
            return Err(Error::BadNoiseBudget(budget));
        }
        Ok(Self { budget, strategy })
    }

    pub fn clean() -> Self {
        Self {
            budget: 0.0,
            strategy: NoiseStrategy::RandomFlip,
        }
    }
}

/// A generated dataset plus bookkeeping about what the adversary did.
#[derive(Debug, Clone)]
pub struct Generated {
    pub data: LabeledDataset,
    /// ⌊budget·n⌋.
    pub requested_flips: usize,
    /// Labels actually flipped; less than requested only when `TailFlip`
    /// ran out of minority points.
    pub realized_flips: usize,
}

impl Generated {
    /// Empirical error of the generating halfspace on the corrupted data.
    pub fn realized_noise(&self) -> f64 {
        self.realized_flips as f64 / self.data.len().max(1) as f64
    }
}

/// Draws `n` points from `marginal`, labels them with `truth`, and applies
/// the adversary. Deterministic in every argument including `seed`.
pub fn generate(
    d: usize,
    n: usize,
    marginal: MarginalKind,
    truth: &Halfspace,
    noise: NoiseProfile,
    seed: u64,
) -> Result<Generated> {
    if truth.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: truth.dim(),
        });
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    match marginal {
        MarginalKind::ScaledGaussian(f) if !(f > 0.0) => {
            return Err(Error::InvalidParameter {
                name: "scale factor",
                value: f,
                reason: "must be positive",
            })
        }
        MarginalKind::TwoPointMixture(s) if !(s > 0.0) => {
            return Err(Error::InvalidParameter {
                name: "separation",
                value: s,
                reason: "must be positive",
            })
        }
        MarginalKind::UniformCube(h) if !(h > 0.0) => {
            return Err(Error::InvalidParameter {
                name: "halfwidth",
                value: h,
                reason: "must be positive",
            })
        }
        _ => {}
    }

    let mut rng = seeding::stream(seed, role::MARGINAL, 0);
    let mut data = LabeledDataset::with_capacity(d, n);
    let mut x = vec![0.0; d];
    for _ in 0..n {
        match marginal {
            MarginalKind::StandardGaussian => {
                for xi in &mut x {
                    *xi = rng.sample(StandardNormal);
                }
            }
            MarginalKind::ScaledGaussian(f) => {
                for xi in &mut x {
                    let z: f64 = rng.sample(StandardNormal);
                    *xi = f * z;
                }
            }
            MarginalKind::TwoPointMixture(s) => {
                x[0] = if rng.gen::<bool>() { s } else { -s };
                for xi in &mut x[1..] {
                    *xi = rng.sample(StandardNormal);
                }
            }
            MarginalKind::UniformCube(h) => {
                for xi in &mut x {
                    *xi = rng.gen_range(-h..h);
                }
            }
        }
        data.push(&x, truth.evaluate(&x));
    }

    let requested = (noise.budget * n as f64).floor() as usize;
    let realized = apply_noise(&mut data, truth, noise.strategy, requested, seed);
    Ok(Generated {
        data,
        requested_flips: requested,
        realized_flips: realized,
    })
}

fn apply_noise(
    data: &mut LabeledDataset,
    truth: &Halfspace,
    strategy: NoiseStrategy,
    requested: usize,
    seed: u64,
) -> usize {
    if requested == 0 {
        return 0;
    }
    let n = data.len();
    let flip: Vec<usize> = match strategy {
        NoiseStrategy::BoundaryFlip => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| {
                let ma = truth.margin(data.point(a)).abs();
                let mb = truth.margin(data.point(b)).abs();
                ma.total_cmp(&mb).then(a.cmp(&b))
            });
            idx.truncate(requested);
            idx
        }
        NoiseStrategy::TailFlip => {
            let (plus, minus) = data.label_counts();
            let minority = if plus <= minus { 1i8 } else { -1i8 };
            let mut idx: Vec<usize> = (0..n).filter(|&i| data.label(i) == minority).collect();
            idx.sort_by(|&a, &b| {
                let ma = truth.margin(data.point(a)).abs();
                let mb = truth.margin(data.point(b)).abs();
                mb.total_cmp(&ma).then(a.cmp(&b))
            });
            idx.truncate(requested);
            idx
        }
        NoiseStrategy::RandomFlip => {
            let mut rng = seeding::stream(seed, role::FLIP, 0);
            let mut idx: Vec<usize> = (0..n).collect();
            // Partial Fisher-Yates: the first `requested` entries are a
            // uniform subset.
            for i in 0..requested.min(n) {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
            }
            idx.truncate(requested);
            idx
        }
    };
    let realized = flip.len();
    for i in flip {
        let y = data.label(i);
        data.set_label(i, -y);
    }
    realized
}

/// Splits a dataset into disjoint parts with the given fractions.
///
/// The permutation is seeded and the part sizes are assigned by largest
/// remainder, so the output is a deterministic function of the inputs and
/// the parts always partition the input exactly.
pub fn split(data: &LabeledDataset, fractions: &[f64], seed: u64) -> Result<Vec<LabeledDataset>> {
    if fractions.is_empty() {
        return Ok(Vec::new());
    }
    let sum: f64 = fractions.iter().sum();
    if fractions.iter().any(|&f| f < 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::BadSplitFractions { sum });
    }
    let n = data.len();
    if fractions.len() > n {
        return Err(Error::SplitTooFine {
            points: n,
            parts: fractions.len(),
        });
    }

    let mut sizes: Vec<usize> = fractions.iter().map(|f| (f * n as f64).floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut remainders: Vec<(usize, f64)> = fractions
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f * n as f64 - (f * n as f64).floor()))
        .collect();
    remainders.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for k in 0..(n - assigned) {
        sizes[remainders[k % remainders.len()].0] += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeding::stream(seed, role::SPLIT, 0);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }

    let mut parts = Vec::with_capacity(fractions.len());
    let mut start = 0;
    for &size in &sizes {
        parts.push(data.gather(&order[start..start + size]));
        start += size;
    }
    Ok(parts)
}

/// Deterministic subsample of at most `cap` points (a seeded shuffle prefix,
/// returned in original order).
pub fn subsample(data: &LabeledDataset, cap: usize, seed: u64) -> LabeledDataset {
    let n = data.len();
    if n <= cap {
        return data.clone();
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeding::stream(seed, role::SUBSAMPLE, 0);
    for i in 0..cap {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
    }
    order.truncate(cap);
    order.sort_unstable();
    data.gather(&order)
}

/// Writes a dataset in the plain-text exchange format.
///
/// First line `d=<dim> n=<count>`, then one point per line: `d` coordinates
/// printed with 17 significant digits (enough for exact f64 round-trips)
/// followed by `+1` or `-1`, all space-separated.
pub fn write_dataset(data: &LabeledDataset, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "d={} n={}", data.dim(), data.len())?;
    for (x, y) in data.iter() {
        for c in x {
            write!(w, "{:.16e} ", c)?;
        }
        writeln!(w, "{}", if y > 0 { "+1" } else { "-1" })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the format written by [`write_dataset`], validating the header and
/// every row.
pub fn read_dataset(path: &Path) -> Result<LabeledDataset> {
    let file = std::fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedDataset {
            line: 1,
            reason: "missing header".into(),
        })??;
    let (d, n) = parse_header(&header)?;
    let mut data = LabeledDataset::with_capacity(d, n);
    let mut x = vec![0.0; d];
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = lineno + 2;
        let mut fields = line.split_whitespace();
        for (j, xj) in x.iter_mut().enumerate() {
            let f = fields.next().ok_or_else(|| Error::MalformedDataset {
                line: row,
                reason: format!("expected {d} coordinates, found {j}"),
            })?;
            *xj = f.parse::<f64>().map_err(|_| Error::MalformedDataset {
                line: row,
                reason: format!("bad coordinate {f:?}"),
            })?;
        }
        let label = fields.next().ok_or_else(|| Error::MalformedDataset {
            line: row,
            reason: "missing label".into(),
        })?;
        let y = match label {
            "+1" | "1" => 1i8,
            "-1" => -1i8,
            other => {
                return Err(Error::MalformedDataset {
                    line: row,
                    reason: format!("bad label {other:?}"),
                })
            }
        };
        if let Some(extra) = fields.next() {
            return Err(Error::MalformedDataset {
                line: row,
                reason: format!("trailing field {extra:?}"),
            });
        }
        data.push(&x, y);
    }
    if data.len() != n {
        return Err(Error::MalformedDataset {
            line: data.len() + 1,
            reason: format!("header promised {n} points, file has {}", data.len()),
        });
    }
    Ok(data)
}

#[allow(clippy::type_complexity)]
fn parse_header(header: &str) -> Result<(usize, usize)> {
    let bad = |reason: &str| Error::MalformedDataset {
        line: 1,
        reason: reason.into(),
    };
    let mut parts = header.split_whitespace();
    let d = parts
        .next()
        .and_then(|p| p.strip_prefix("d="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| bad("expected `d=<int>`"))?;
    let n = parts
        .next()
        .and_then(|p| p.strip_prefix("n="))
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| bad("expected `n=<int>`"))?;
    if parts.next().is_some() {
        return Err(bad("unexpected trailing header fields"));
    }
    if d == 0 || n == 0 {
        return Err(bad("d and n must be positive"));
    }
    Ok((d, n))
}
