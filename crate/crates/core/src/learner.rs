//! The learning pipeline: an iterative near-homogeneous direction learner,
//! threshold-grid hypothesis construction, the full single-trial
//! tester-learner, and a majority-vote confidence booster.
//!
//! A single trial splits its sample three ways. The fit part feeds the
//! center search and everything downstream of it: each candidate center is
//! localized by rejection sampling, the survivors are re-isotropized, and
//! the inner learner runs rounds of band filtering with a geometrically
//! shrinking width, re-estimating the direction from the correlation vector
//! E[yx] each round. Every direction that makes it out is certified by a
//! wedge test on the unfiltered fit sample and expanded into a grid of
//! thresholds. The select part picks the best hypothesis from the pooled
//! grids plus the two constant classifiers; the holdout part measures the
//! winner's error on points no stage ever saw.
//!
//! Rejection is asymmetric by design. Checks run on the full sample
//! (covariance, moments, the wedge certificate behind an accepted
//! direction) reject the whole trial; checks run inside one candidate's
//! localized region only skip that candidate, because a poorly placed
//! center can starve or lose label signal even on perfectly Gaussian data.

use crate::center_finder::{find_centers, CandidateSource, CenterOutcome};
use crate::core::{
    dot, norm, normalize, Diagnostic, Halfspace, LabeledDataset, LearnConfig, SampleCaps,
    TesterVerdict,
};
use crate::error::{Error, Result};
use crate::localization::{reject_filter, RejectionParams, MIN_ACCEPT_EXPONENT};
use crate::seeding::{derive, point_uniform, role};
use crate::synth::split;
use crate::testers::{default_moment_tol, test_covariance, test_moments, wedge_bound_test};

/// Band resolution used by every wedge certification in the pipeline.
const WEDGE_ETA: f64 = 0.1;

/// Fewest survivors a localized sample may have; below this the region is
/// too thin to estimate a direction from.
const MIN_SURVIVORS: usize = 100;

/// Shortest usable correlation vector E[yx]. A near-homogeneous halfspace
/// keeps this length above 0.7 on true Gaussian data, so falling under the
/// floor means the localized region carries no direction signal.
const CHOW_FLOOR: f64 = 0.05;

/// Fit / select / holdout proportions for a single trial.
const SPLIT_FRACTIONS: [f64; 3] = [0.7, 0.2, 0.1];

/// Smallest sample `testable_learn` agrees to run on.
pub const MIN_SAMPLE: usize = 300;

/// Most trials a boosted run will ever launch, whatever the confidence.
pub const TRIAL_CAP: usize = 200;

/// A classifier the pipeline can output: a halfspace, or a constant that
/// ignores its input. Constants are always in the running, so data whose
/// labels carry no geometric structure still gets an honest hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Halfspace(Halfspace),
    Constant(i8),
}

impl Hypothesis {
    pub fn predict(&self, x: &[f64]) -> i8 {
        match self {
            Hypothesis::Halfspace(h) => h.evaluate(x),
            Hypothesis::Constant(c) => *c,
        }
    }

    pub fn error_count(&self, data: &LabeledDataset) -> usize {
        data.iter().filter(|&(x, y)| self.predict(x) != y).count()
    }

    pub fn error_on(&self, data: &LabeledDataset) -> f64 {
        self.error_count(data) as f64 / data.len().max(1) as f64
    }

    /// |threshold| for halfspaces, infinite for constants; the selection
    /// tie-break prefers boundaries near the origin.
    pub fn threshold_magnitude(&self) -> f64 {
        match self {
            Hypothesis::Halfspace(h) => h.threshold().abs(),
            Hypothesis::Constant(_) => f64::INFINITY,
        }
    }
}

/// How a candidate's survivors relate to the original frame: either they
/// were taken as-is, or they went through a rejection filter whose
/// transform must be undone on the way back.
#[derive(Debug, Clone)]
pub enum Localization {
    Identity,
    Centered(RejectionParams),
}

impl Localization {
    /// Maps a direction learned in the localized frame back to the
    /// original frame, always unit-length.
    pub fn revert_direction(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Localization::Identity => normalize(v),
            Localization::Centered(p) => p.revert_direction(v),
        }
    }
}

/// What the inner direction learner hands back.
#[derive(Debug, Clone)]
pub enum DirectionOutcome {
    Reject(Diagnostic),
    Direction(Vec<f64>),
}

impl DirectionOutcome {
    pub fn direction(&self) -> Option<&[f64]> {
        match self {
            DirectionOutcome::Direction(v) => Some(v),
            DirectionOutcome::Reject(_) => None,
        }
    }

    pub fn rejection(&self) -> Option<&Diagnostic> {
        match self {
            DirectionOutcome::Reject(d) => Some(d),
            DirectionOutcome::Direction(_) => None,
        }
    }
}

/// An accepted run: the winning hypothesis and its measured quality.
#[derive(Debug, Clone)]
pub struct Accepted {
    pub chosen: Hypothesis,
    /// Error on held-out points that no fitting or selection stage saw.
    pub test_error: f64,
    /// Size of the pool the winner was selected from.
    pub hypotheses_considered: usize,
}

#[derive(Debug, Clone)]
pub enum LearnVerdict {
    Reject(Diagnostic),
    Accept(Accepted),
}

/// Verdict of a learning run plus the skipped-candidate trail, kept for
/// diagnosis; a long trail with an Accept is normal, not a warning sign.
#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub verdict: LearnVerdict,
    pub skipped: Vec<Diagnostic>,
}

impl LearnOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self.verdict, LearnVerdict::Accept(_))
    }

    pub fn accepted(&self) -> Option<&Accepted> {
        match &self.verdict {
            LearnVerdict::Accept(a) => Some(a),
            LearnVerdict::Reject(_) => None,
        }
    }

    pub fn rejection(&self) -> Option<&Diagnostic> {
        match &self.verdict {
            LearnVerdict::Reject(d) => Some(d),
            LearnVerdict::Accept(_) => None,
        }
    }
}

fn guarded_ceil(x: f64) -> i64 {
    // absorb upward float rounding so mathematically integral values do
    // not tip over to the next integer
    (x - 1e-9).ceil() as i64
}

/// Number of localization rounds for accuracy `epsilon`.
fn round_count(epsilon: f64) -> u32 {
    guarded_ceil((1.0 / epsilon).log2()).max(1) as u32
}

/// Threshold grid half-width: hypotheses get thresholds `i·ε` for
/// `|i| ≤ steps`, covering `[−ln(1/ε), ln(1/ε)]`.
fn threshold_steps(epsilon: f64) -> i64 {
    guarded_ceil((1.0 / epsilon).ln() / epsilon)
}

fn prefix(data: &LabeledDataset, cap: usize) -> LabeledDataset {
    if data.len() <= cap {
        data.clone()
    } else {
        let idx: Vec<usize> = (0..cap).collect();
        data.gather(&idx)
    }
}

/// Learns the direction of a halfspace whose threshold is within O(ε) of
/// zero, or rejects the sample.
///
/// After certifying covariance and degree-4 moments, the direction is
/// initialized from E[yx] and refined over `⌈log₂(1/ε)⌉` rounds. Round r
/// certifies the sample's band structure along the current direction with
/// a wedge test, keeps the points of a Gaussian band of width
/// `σ_r = max(2^−r, ε/4)` via rejection sampling, re-isotropizes the
/// survivors, and re-reads the direction from their correlation vector.
/// The returned direction is unit-length and lives in the same frame as
/// the input sample.
pub fn learn_near_homogeneous(
    s: &LabeledDataset,
    epsilon: f64,
    seed: u64,
    caps: &SampleCaps,
) -> Result<DirectionOutcome> {
    assert!(!s.is_empty(), "cannot learn from an empty sample");
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");

    // The signal screen runs before the certification testers. A screened
    // candidate is only skipped, so nothing it computed is trusted, and in
    // a center grid most candidates sit where labels carry no direction;
    // they exit for the cost of one correlation read instead of a full
    // certification pass. Whatever clears the screen is certified in the
    // usual order before its direction is used.
    let chow = crate::center_finder::chow_vector(s);
    let signal = norm(&chow);
    if signal < CHOW_FLOOR {
        return Ok(DirectionOutcome::Reject(Diagnostic {
            check: "chow-signal".into(),
            statistic: signal,
            message: format!(
                "correlation vector has length {signal:.4}, below the floor {CHOW_FLOOR}; \
                 labels carry no direction here"
            ),
        }));
    }
    let mut v = normalize(&chow);

    let cert = prefix(s, caps.certification);
    for r in 1..=round_count(epsilon) {
        let sigma = 0.5f64.powi(r as i32).max(epsilon / 4.0);
        if let TesterVerdict::Reject(diag) = wedge_bound_test(&cert, &v, WEDGE_ETA) {
            return Ok(DirectionOutcome::Reject(diag));
        }
        let band = RejectionParams::band(&v, sigma)?;
        let kept = reject_filter(s, &band, derive(seed, role::ROUND, u64::from(r)));
        if kept.data.len() < MIN_SURVIVORS {
            return Ok(DirectionOutcome::Reject(Diagnostic {
                check: "insufficient localized mass".into(),
                statistic: kept.data.len() as f64,
                message: format!(
                    "round {r}: band of width {sigma:.4} kept {} of {} points",
                    kept.data.len(),
                    s.len()
                ),
            }));
        }
        let iso = band.isotropize(&kept.data);
        let chow = crate::center_finder::chow_vector(&iso);
        let signal = norm(&chow);
        if signal < CHOW_FLOOR {
            return Ok(DirectionOutcome::Reject(Diagnostic {
                check: "chow-signal".into(),
                statistic: signal,
                message: format!(
                    "round {r}: correlation vector shrank to {signal:.4} inside the band"
                ),
            }));
        }
        v = band.revert_direction(&normalize(&chow));
    }

    // Certification of the region's shape runs once the rounds have settled
    // a direction rather than before them: a candidate that dies mid-round
    // emits nothing, so nothing downstream ever trusted it, and across a
    // center grid the dying candidates are the common case. A direction is
    // only returned from a region that passed every check.
    if let TesterVerdict::Reject(diag) = test_covariance(s, 2.0) {
        return Ok(DirectionOutcome::Reject(diag));
    }
    let moment_data = prefix(s, caps.moment_check);
    let tol = default_moment_tol(4, moment_data.len());
    if let TesterVerdict::Reject(diag) = test_moments(&moment_data, 4, tol)? {
        return Ok(DirectionOutcome::Reject(diag));
    }
    Ok(DirectionOutcome::Direction(v))
}

/// Expands a learned direction into a grid of halfspaces.
///
/// The direction is mapped back to the original frame through `loc`, then
/// paired with every threshold `i·ε` for `|i| ≤ ⌈ln(1/ε)/ε⌉`. All
/// returned halfspaces share one unit direction; thresholds increase by
/// exactly ε.
pub fn build_hypotheses(v: &[f64], loc: &Localization, epsilon: f64) -> Vec<Halfspace> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");
    let reverted = loc.revert_direction(v);
    let steps = threshold_steps(epsilon);
    (-steps..=steps)
        .map(|i| Halfspace::new(&reverted, i as f64 * epsilon).expect("reverted direction is unit"))
        .collect()
}

/// Hypotheses sharing one direction, thresholds ascending by ε.
struct HypothesisGroup {
    halfspaces: Vec<Halfspace>,
}

/// Select-set error counts for every hypothesis in a group, exactly.
///
/// A hypothesis with threshold `i·ε` predicts +1 iff `v·x ≥ −i·ε`, i.e.
/// iff `⌊v·x/ε⌋ ≥ −i`; bucketing each point by that integer makes all
/// `2·steps + 1` error counts a matter of prefix sums, and the counts
/// agree with evaluating each halfspace point by point, boundary cases
/// included.
fn group_error_counts(
    dir: &[f64],
    steps: i64,
    sel: &LabeledDataset,
    epsilon: f64,
) -> Vec<usize> {
    let buckets = (2 * steps + 2) as usize;
    let mut plus = vec![0usize; buckets];
    let mut minus = vec![0usize; buckets];
    let low = -(steps as f64) - 1.0;
    let high = steps as f64;
    for (x, y) in sel.iter() {
        let j = (dot(dir, x) / epsilon).floor().clamp(low, high);
        let b = (j as i64 + steps + 1) as usize;
        if y == 1 {
            plus[b] += 1;
        } else {
            minus[b] += 1;
        }
    }
    let mut plus_below = vec![0usize; buckets + 1];
    for b in 0..buckets {
        plus_below[b + 1] = plus_below[b] + plus[b];
    }
    let mut minus_from = vec![0usize; buckets + 1];
    for b in (0..buckets).rev() {
        minus_from[b] = minus_from[b + 1] + minus[b];
    }
    (-steps..=steps)
        .map(|i| {
            let k = (-i + steps + 1) as usize;
            plus_below[k] + minus_from[k]
        })
        .collect()
}

/// Picks the pool-wide winner on the selection sample: smallest error
/// count, ties to the smaller |threshold|, then to the earlier position.
/// Returns the winner, the pool size, and the winner's error count.
fn select_hypothesis(
    groups: &[HypothesisGroup],
    sel: &LabeledDataset,
    epsilon: f64,
    steps: i64,
) -> (Hypothesis, usize, usize) {
    let (n_plus, n_minus) = sel.label_counts();
    let mut best: Option<(usize, f64, Hypothesis)> = None;
    let mut considered = 0usize;
    let offer = |errors: usize, hyp: Hypothesis, best: &mut Option<(usize, f64, Hypothesis)>| {
        let mag = hyp.threshold_magnitude();
        let wins = match best {
            None => true,
            Some((be, bm, _)) => errors < *be || (errors == *be && mag < *bm),
        };
        if wins {
            *best = Some((errors, mag, hyp));
        }
    };
    for group in groups {
        let dir = group.halfspaces[0].direction();
        let counts = group_error_counts(dir, steps, sel, epsilon);
        for (h, &errors) in group.halfspaces.iter().zip(&counts) {
            offer(errors, Hypothesis::Halfspace(h.clone()), &mut best);
            considered += 1;
        }
    }
    offer(n_minus, Hypothesis::Constant(1), &mut best);
    offer(n_plus, Hypothesis::Constant(-1), &mut best);
    considered += 2;
    let (errors, _, chosen) = best.expect("constants are always offered");
    (chosen, considered, errors)
}

fn source_slot(s: CandidateSource) -> usize {
    match s {
        CandidateSource::TailMeanPlus => 0,
        CandidateSource::TailMeanMinus => 1,
        CandidateSource::ChowPath => 2,
    }
}

/// One full tester-learner trial: reject the sample, or return a
/// hypothesis with its held-out error.
///
/// The sample is split into fit, select, and holdout parts. The fit part
/// produces candidate centers, each candidate is localized and handed to
/// the inner learner, surviving directions are wedge-certified against
/// the unfiltered fit sample and expanded into threshold grids, and the
/// select part chooses among the pooled grids and the two constants. A
/// candidate whose localized region fails its checks is skipped, not
/// fatal; a failed full-sample check rejects the trial.
pub fn testable_learn(s: &LabeledDataset, config: &LearnConfig) -> Result<LearnOutcome> {
    config.validate()?;
    if s.len() < MIN_SAMPLE {
        return Err(Error::InvalidParameter {
            name: "sample",
            value: s.len() as f64,
            reason: "too few points to fit, select, and hold out",
        });
    }
    let epsilon = config.epsilon;
    let caps = &config.caps;
    let parts = split(s, &SPLIT_FRACTIONS, derive(config.seed, role::SPLIT, 0))?;
    let (fit, select, holdout) = (&parts[0], &parts[1], &parts[2]);

    let candidates = match find_centers(fit, epsilon)? {
        CenterOutcome::Reject(diag) => {
            return Ok(LearnOutcome {
                verdict: LearnVerdict::Reject(diag),
                skipped: Vec::new(),
            })
        }
        CenterOutcome::Centers(c) => c,
    };

    let n_fit = fit.len();
    let filter_seed = derive(config.seed, role::FILTER, 0);
    // Point i survives a candidate's filter iff its rejection exponent is
    // under this bound; precomputing the bounds makes each candidate's
    // scan a compare per point, and the per-point uniforms match what
    // reject_filter would draw under the same seed.
    let keep_bounds: Vec<f64> = (0..n_fit)
        .map(|i| (-point_uniform(filter_seed, i as u64).ln()).min(MIN_ACCEPT_EXPONENT))
        .collect();
    let mut ray_projections: [Option<Vec<f64>>; 3] = [None, None, None];

    let steps = threshold_steps(epsilon);
    let wedge_data = prefix(fit, caps.wedge);
    let mut groups: Vec<HypothesisGroup> = Vec::new();
    let mut skipped: Vec<Diagnostic> = Vec::new();
    let mut origin_done = false;

    for (j, cand) in candidates.iter().enumerate() {
        let inner_seed = derive(config.seed, role::CANDIDATE, j as u64);
        let radius = norm(&cand.point);
        let (localized, loc) = if radius < 1e-12 {
            // Every source's grid starts at the origin; run it once.
            if origin_done {
                continue;
            }
            origin_done = true;
            (prefix(fit, caps.target_survivors), Localization::Identity)
        } else {
            let p = RejectionParams::for_center(&cand.point)?;
            let want = (caps.target_survivors as f64 / p.acceptance_rate()).ceil() as usize;
            let n_scan = n_fit.min(caps.localization).min(want);
            // When even the longest allowed scan cannot expect the minimum
            // survivor count, the scan's outcome is already decided, so record
            // the skip without paying for it. Only cap-bound scans can land
            // here; rate-bound scans always expect the full target. Data in
            // this loop has passed the global shape checks, so the closed-form
            // rate is an accurate forecast of what scanning would find.
            let expected = n_scan as f64 * p.acceptance_rate();
            if expected < MIN_SURVIVORS as f64 {
                skipped.push(Diagnostic {
                    check: "insufficient localized mass".into(),
                    statistic: expected,
                    message: format!(
                        "candidate {j} at radius {radius:.3}: \
                         {expected:.0} expected survivors of {n_scan} scannable"
                    ),
                });
                continue;
            }
            let slot = source_slot(cand.source);
            if ray_projections[slot].is_none() {
                ray_projections[slot] = Some(fit.project(&normalize(&cand.point)));
            }
            let proj = ray_projections[slot].as_ref().expect("filled above");
            let mut kept: Vec<usize> = Vec::new();
            for (i, (&pr, &bound)) in proj[..n_scan].iter().zip(&keep_bounds).enumerate() {
                if p.exponent_at(pr) < bound {
                    kept.push(i);
                }
            }
            if kept.len() < MIN_SURVIVORS {
                skipped.push(Diagnostic {
                    check: "insufficient localized mass".into(),
                    statistic: kept.len() as f64,
                    message: format!(
                        "candidate {j} at radius {radius:.3}: {} survivors of {n_scan} scanned",
                        kept.len()
                    ),
                });
                continue;
            }
            let survivors = fit.gather(&kept);
            (p.isotropize(&survivors), Localization::Centered(p))
        };

        match learn_near_homogeneous(&localized, epsilon, inner_seed, caps)? {
            DirectionOutcome::Reject(diag) => {
                skipped.push(Diagnostic {
                    check: diag.check.clone(),
                    statistic: diag.statistic,
                    message: format!("candidate {j}: {}", diag.message),
                });
            }
            DirectionOutcome::Direction(v) => {
                let halfspaces = build_hypotheses(&v, &loc, epsilon);
                let back = halfspaces[0].direction();
                if let TesterVerdict::Reject(diag) = wedge_bound_test(&wedge_data, back, WEDGE_ETA)
                {
                    return Ok(LearnOutcome {
                        verdict: LearnVerdict::Reject(diag),
                        skipped,
                    });
                }
                groups.push(HypothesisGroup { halfspaces });
            }
        }
    }

    let sel = prefix(select, caps.selection);
    let (chosen, considered, _) = select_hypothesis(&groups, &sel, epsilon, steps);
    let test_error = chosen.error_on(holdout);
    Ok(LearnOutcome {
        verdict: LearnVerdict::Accept(Accepted {
            chosen,
            test_error,
            hypotheses_considered: considered,
        }),
        skipped,
    })
}

/// Anything that can hand out fresh labeled samples on demand.
pub trait SampleSource {
    fn draw(&mut self, n: usize) -> Result<LabeledDataset>;
}

/// A source that deals consecutive chunks of one fixed dataset.
pub struct SliceSource<'a> {
    data: &'a LabeledDataset,
    cursor: usize,
}

impl<'a> SliceSource<'a> {
    pub fn new(data: &'a LabeledDataset) -> Self {
        Self { data, cursor: 0 }
    }

    /// Points handed out so far.
    pub fn consumed(&self) -> usize {
        self.cursor
    }
}

impl SampleSource for SliceSource<'_> {
    fn draw(&mut self, n: usize) -> Result<LabeledDataset> {
        let available = self.data.len() - self.cursor;
        if n > available {
            return Err(Error::SourceExhausted {
                requested: n,
                available,
            });
        }
        let idx: Vec<usize> = (self.cursor..self.cursor + n).collect();
        self.cursor += n;
        Ok(self.data.gather(&idx))
    }
}

fn raw_trial_count(tau: f64) -> usize {
    guarded_ceil(10.0 * (1.0 / tau).ln()) as usize
}

/// Trials a boosted run will launch at confidence `tau`.
pub fn boost_trial_count(tau: f64) -> usize {
    raw_trial_count(tau).min(TRIAL_CAP)
}

/// Fresh points each of the boosted selection stage's two draws (selection
/// and holdout) consumes. Callers budgeting a fixed sample across a boosted
/// run need this alongside [`boost_trial_count`].
pub fn selection_sample_size(d: usize, epsilon: f64, tau: f64) -> usize {
    let spread = (1.0 / tau).ln() + std::f64::consts::E;
    (20.0 * d as f64 * spread.ln() / (epsilon * epsilon)).ceil() as usize
}

/// Runs `testable_learn` on `⌈10·ln(1/τ)⌉` fresh samples and aggregates.
///
/// Rejects only when more than half of the trials reject, which drives
/// the failure probability of a sound verdict down to τ. Otherwise the
/// accepted trials' winners are pooled, and a fresh selection sample of
/// size `⌈20·d·ln(ln(1/τ) + e)/ε²⌉` picks among them; a second fresh
/// sample of the same size measures the winner's error.
pub fn boosted_learn<S: SampleSource + ?Sized>(
    source: &mut S,
    n_per_trial: usize,
    config: &LearnConfig,
) -> Result<LearnOutcome> {
    config.validate()?;
    let raw = raw_trial_count(config.tau);
    let trials = raw.min(TRIAL_CAP);
    let mut skipped: Vec<Diagnostic> = Vec::new();
    if raw > TRIAL_CAP {
        skipped.push(Diagnostic {
            check: "trial-cap".into(),
            statistic: raw as f64,
            message: format!(
                "confidence {} asks for {raw} trials; capped at {TRIAL_CAP}",
                config.tau
            ),
        });
    }

    let mut rejects = 0usize;
    let mut first_reject: Option<Diagnostic> = None;
    let mut pool: Vec<Hypothesis> = Vec::new();
    let mut dim = 0usize;
    for trial in 0..trials {
        let data = source.draw(n_per_trial)?;
        dim = data.dim();
        let mut trial_config = config.clone();
        trial_config.seed = derive(config.seed, role::TRIAL, trial as u64);
        match testable_learn(&data, &trial_config)?.verdict {
            LearnVerdict::Reject(diag) => {
                rejects += 1;
                skipped.push(Diagnostic {
                    check: diag.check.clone(),
                    statistic: diag.statistic,
                    message: format!("trial {trial}: {}", diag.message),
                });
                if first_reject.is_none() {
                    first_reject = Some(diag);
                }
            }
            LearnVerdict::Accept(acc) => pool.push(acc.chosen),
        }
    }

    if 2 * rejects > trials {
        let cause = first_reject.expect("a rejecting majority has a first reject");
        return Ok(LearnOutcome {
            verdict: LearnVerdict::Reject(Diagnostic {
                check: "majority-reject".into(),
                statistic: rejects as f64,
                message: format!(
                    "{rejects} of {trials} trials rejected; first cause {}: {}",
                    cause.check, cause.message
                ),
            }),
            skipped,
        });
    }

    let sel_size = selection_sample_size(dim, config.epsilon, config.tau);
    let sel = source.draw(sel_size)?;
    let hold = source.draw(sel_size)?;

    let mut best: Option<(usize, f64, usize)> = None;
    for (idx, h) in pool.iter().enumerate() {
        let errors = h.error_count(&sel);
        let mag = h.threshold_magnitude();
        let wins = match &best {
            None => true,
            Some((be, bm, _)) => errors < *be || (errors == *be && mag < *bm),
        };
        if wins {
            best = Some((errors, mag, idx));
        }
    }
    let (_, _, idx) = best.expect("an accepting majority leaves a nonempty pool");
    let chosen = pool[idx].clone();
    let test_error = chosen.error_on(&hold);
    Ok(LearnOutcome {
        verdict: LearnVerdict::Accept(Accepted {
            chosen,
            test_error,
            hypotheses_considered: pool.len(),
        }),
        skipped,
    })
}
