//! Search for localization centers: points near the unknown decision
//! boundary that the pipeline can filter around.
//!
//! Two complementary routes produce candidates. The tail route follows the
//! conditional mean of each label class outward along its ray, which finds
//! boundaries far from the origin as long as the rarer label keeps enough
//! mass to average. The Chow route follows Ê[yx], which recovers the
//! boundary direction whenever the threshold is moderate. Neither route
//! knows which of its grid points is good; the contract is only that the
//! combined list contains one, or that the sample is rejected as
//! non-Gaussian on the way.

use crate::core::{
    dot, gaussian_tail, norm, normalize, Diagnostic, Halfspace, LabeledDataset, TesterVerdict,
};
use crate::error::Result;
use crate::testers::{
    default_moment_tol, ks_test, test_covariance, test_mean, test_moments, test_trimmed_stability,
};

/// Which search route produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSource {
    TailMeanPlus,
    TailMeanMinus,
    ChowPath,
}

/// One proposed localization center.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterCandidate {
    pub point: Vec<f64>,
    pub source: CandidateSource,
    /// Position on the source ray; the point is `grid_index · ε² · ray`.
    pub grid_index: usize,
}

/// Conditional statistics of one label class.
#[derive(Debug, Clone, PartialEq)]
pub struct TailStats {
    /// Empirical mass of the rarer label over the whole sample.
    pub minority_mass: f64,
    /// Mean of the points carrying `tail_label`.
    pub tail_mean: Vec<f64>,
    pub tail_label: i8,
}

/// Result of a center search: a rejection, or the candidate list.
#[derive(Debug, Clone)]
pub enum CenterOutcome {
    Reject(Diagnostic),
    Centers(Vec<CenterCandidate>),
}

impl CenterOutcome {
    pub fn is_reject(&self) -> bool {
        matches!(self, CenterOutcome::Reject(_))
    }

    pub fn centers(&self) -> Option<&[CenterCandidate]> {
        match self {
            CenterOutcome::Centers(c) => Some(c),
            CenterOutcome::Reject(_) => None,
        }
    }
}

/// Conditional mean of the points with the given label, or `None` if the
/// label is absent.
pub fn tail_mean(data: &LabeledDataset, label: i8) -> Option<TailStats> {
    assert!(label == 1 || label == -1, "labels are ±1");
    let d = data.dim();
    let mut sum = vec![0.0; d];
    let mut count = 0usize;
    for (x, y) in data.iter() {
        if y == label {
            for (s, &xi) in sum.iter_mut().zip(x) {
                *s += xi;
            }
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    for s in sum.iter_mut() {
        *s /= count as f64;
    }
    let (plus, minus) = data.label_counts();
    Some(TailStats {
        minority_mass: plus.min(minus) as f64 / data.len() as f64,
        tail_mean: sum,
        tail_label: label,
    })
}

/// The empirical Chow vector Ê[yx].
pub fn chow_vector(data: &LabeledDataset) -> Vec<f64> {
    assert!(!data.is_empty());
    let d = data.dim();
    let mut sum = vec![0.0; d];
    for (x, y) in data.iter() {
        let s = y as f64;
        for (acc, &xi) in sum.iter_mut().zip(x) {
            *acc += s * xi;
        }
    }
    for s in sum.iter_mut() {
        *s /= data.len() as f64;
    }
    sum
}

/// Fewest points a label class needs before its conditional mean is worth
/// following; below this the tail route is skipped and the Chow route (plus
/// the constant hypotheses downstream) carries the run.
pub fn min_tail_count(d: usize) -> usize {
    60.max(12 * d)
}

/// Extra grid slots allowed beyond the nominal list-size budget before the
/// mean's length is declared incompatible with the tests it passed.
const GRID_CAP_SLACK: usize = 8;

/// Produce the candidate-center list, or reject the sample.
///
/// The full sample is vetted first (covariance, mean); each usable tail
/// then has its projection vetted (Kolmogorov, trimmed stability) before
/// its ray is gridded at spacing ε² out past the mean's length. The Chow
/// route runs last and its candidates are appended. Order is fixed:
/// plus-tail grid, minus-tail grid, Chow grid.
pub fn find_centers(data: &LabeledDataset, epsilon: f64) -> Result<CenterOutcome> {
    assert!(!data.is_empty(), "center search on an empty dataset");
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");
    let d = data.dim();

    if let TesterVerdict::Reject(diag) = test_covariance(data, 2.0) {
        return Ok(CenterOutcome::Reject(diag));
    }
    if let TesterVerdict::Reject(diag) = test_mean(data, epsilon) {
        return Ok(CenterOutcome::Reject(diag));
    }

    let (plus, minus) = data.label_counts();
    let tails_usable = plus.min(minus) >= min_tail_count(d);

    let mut out: Vec<CenterCandidate> = Vec::new();
    if tails_usable {
        for (label, source) in [
            (1, CandidateSource::TailMeanPlus),
            (-1, CandidateSource::TailMeanMinus),
        ] {
            let stats = tail_mean(data, label).expect("label count checked above");
            match tail_ray_candidates(data, &stats, epsilon, source) {
                TailRay::Reject(diag) => return Ok(CenterOutcome::Reject(diag)),
                TailRay::Candidates(mut c) => out.append(&mut c),
            }
        }
    }

    match chow_center_search(data, epsilon)? {
        CenterOutcome::Reject(diag) => Ok(CenterOutcome::Reject(diag)),
        CenterOutcome::Centers(mut c) => {
            out.append(&mut c);
            Ok(CenterOutcome::Centers(out))
        }
    }
}

enum TailRay {
    Reject(Diagnostic),
    Candidates(Vec<CenterCandidate>),
}

fn tail_ray_candidates(
    data: &LabeledDataset,
    stats: &TailStats,
    epsilon: f64,
    source: CandidateSource,
) -> TailRay {
    let mu_len = norm(&stats.tail_mean);
    let spacing = epsilon * epsilon;
    if mu_len < spacing {
        return TailRay::Candidates(vec![CenterCandidate {
            point: vec![0.0; data.dim()],
            source,
            grid_index: 0,
        }]);
    }
    let ray = normalize(&stats.tail_mean);
    let proj = data.project(&ray);
    if let TesterVerdict::Reject(diag) = ks_test(&proj, epsilon) {
        return TailRay::Reject(diag);
    }
    if let TesterVerdict::Reject(diag) = test_trimmed_stability(&proj, epsilon) {
        return TailRay::Reject(diag);
    }

    let b = stats.minority_mass;
    let reach = mu_len + 1.0 / (1.0 / b).ln().sqrt();
    let count = (reach / spacing).ceil() as usize;
    let cap = (2.0 * (1.0 / b).log2() / spacing).ceil() as usize + GRID_CAP_SLACK;
    if count > cap {
        return TailRay::Reject(Diagnostic {
            check: "tail-grid".into(),
            statistic: mu_len,
            message: format!(
                "conditional mean of length {mu_len:.3} would need {count} grid points \
                 (budget {cap}); inconsistent with a Gaussian tail of mass {b:.4}"
            ),
        });
    }
    TailRay::Candidates(
        (0..=count)
            .map(|i| CenterCandidate {
                point: ray.iter().map(|&r| i as f64 * spacing * r).collect(),
                source,
                grid_index: i,
            })
            .collect(),
    )
}

/// The Chow route: certify low moments, then grid the Chow direction out
/// to distance 10 at spacing ε². A Chow vector shorter than ε carries no
/// usable direction and contributes only the origin.
pub fn chow_center_search(data: &LabeledDataset, epsilon: f64) -> Result<CenterOutcome> {
    assert!(!data.is_empty());
    let tol = default_moment_tol(4, data.len());
    if let TesterVerdict::Reject(diag) = test_moments(data, 4, tol)? {
        return Ok(CenterOutcome::Reject(diag));
    }
    let chow = chow_vector(data);
    let origin = CenterCandidate {
        point: vec![0.0; data.dim()],
        source: CandidateSource::ChowPath,
        grid_index: 0,
    };
    if norm(&chow) < epsilon {
        return Ok(CenterOutcome::Centers(vec![origin]));
    }
    let ray = normalize(&chow);
    let spacing = epsilon * epsilon;
    let count = (10.0 / spacing).ceil() as usize;
    Ok(CenterOutcome::Centers(
        (0..=count)
            .map(|i| CenterCandidate {
                point: ray.iter().map(|&r| i as f64 * spacing * r).collect(),
                source: CandidateSource::ChowPath,
                grid_index: i,
            })
            .collect(),
    ))
}

/// Ground-truth quality of a candidate center, for oracle checks only:
/// distance to the separating hyperplane, and the Gaussian mass beyond the
/// candidate's radius.
pub fn center_quality(c: &CenterCandidate, truth: &Halfspace) -> (f64, f64) {
    let alpha = (dot(truth.direction(), &c.point) + truth.threshold()).abs();
    let beta = gaussian_tail(norm(&c.point));
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, MarginalKind, NoiseProfile, NoiseStrategy};

    const TAIL_MEAN_AT_2: f64 = 2.37321553282284;

    fn clean(d: usize, n: usize, t_star: f64, seed: u64) -> LabeledDataset {
        generate(
            d,
            n,
            MarginalKind::StandardGaussian,
            &Halfspace::axis(d, 0, -t_star),
            NoiseProfile::clean(),
            seed,
        )
        .unwrap()
        .data
    }

    #[test]
    fn tail_mean_two_point() {
        let mut data = LabeledDataset::new(2);
        data.push(&[1.0, 0.0], 1);
        data.push(&[-1.0, 0.0], -1);
        let stats = tail_mean(&data, 1).unwrap();
        assert_eq!(stats.tail_mean, vec![1.0, 0.0]);
        assert_eq!(stats.minority_mass, 0.5);
        let mut one_sided = LabeledDataset::new(2);
        one_sided.push(&[0.0, 0.0], 1);
        assert!(tail_mean(&one_sided, -1).is_none());
    }

    #[test]
    fn tail_mean_matches_truncated_gaussian() {
        let data = clean(5, 400_000, 2.0, 50);
        let stats = tail_mean(&data, 1).unwrap();
        assert!(
            (stats.tail_mean[0] - TAIL_MEAN_AT_2).abs() < 0.03,
            "mu = {:?}",
            stats.tail_mean
        );
        assert!(stats.tail_mean[1].abs() < 0.03);
        assert!((stats.minority_mass - 0.02275).abs() < 0.002);
    }

    #[test]
    fn mirrored_data_has_opposite_tail_means() {
        let base = clean(3, 1_000, 0.0, 51);
        let mut data = LabeledDataset::new(3);
        for (x, _) in base.iter() {
            let y = if x[0] >= 0.0 { 1 } else { -1 };
            data.push(x, y);
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            data.push(&neg, -y);
        }
        let plus = tail_mean(&data, 1).unwrap();
        let minus = tail_mean(&data, -1).unwrap();
        for (a, b) in plus.tail_mean.iter().zip(&minus.tail_mean) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn finds_center_near_far_boundary() {
        let data = clean(5, 400_000, 2.5, 52);
        let truth = Halfspace::axis(5, 0, -2.5);
        let out = find_centers(&data, 0.05).unwrap();
        let centers = match &out {
            CenterOutcome::Reject(d) => panic!("clean data rejected by {}: {}", d.check, d.message),
            CenterOutcome::Centers(c) => c,
        };
        let best = centers
            .iter()
            .map(|c| center_quality(c, &truth).0)
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 0.02, "closest hyperplane distance {best}");
        // Off-axis drift of the near-boundary candidates stays small.
        let good = centers
            .iter()
            .find(|c| center_quality(c, &truth).0 <= 0.02)
            .unwrap();
        let off_axis: f64 = good.point[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(off_axis < 0.1, "off-axis {off_axis}");
    }

    #[test]
    fn tail_grid_respects_size_budget() {
        for t_star in [0.0, 1.0, 2.0] {
            let data = clean(4, 200_000, t_star, 53);
            let out = find_centers(&data, 0.05).unwrap();
            let centers = out.centers().expect("clean data accepted");
            let b = tail_mean(&data, 1).unwrap().minority_mass;
            let cap = (2.0 * (1.0 / b).log2() / 0.0025).ceil() as usize + GRID_CAP_SLACK;
            let tail_plus = centers
                .iter()
                .filter(|c| c.source == CandidateSource::TailMeanPlus)
                .count();
            assert!(
                tail_plus >= 1 && tail_plus <= cap + 1,
                "t* = {t_star}: {tail_plus} candidates vs cap {cap}"
            );
        }
    }

    #[test]
    fn rejects_inflated_covariance() {
        let data = generate(
            4,
            50_000,
            MarginalKind::ScaledGaussian(3f64.sqrt()),
            &Halfspace::axis(4, 0, 0.0),
            NoiseProfile::clean(),
            54,
        )
        .unwrap()
        .data;
        match find_centers(&data, 0.05).unwrap() {
            CenterOutcome::Reject(diag) => assert_eq!(diag.check, "covariance"),
            CenterOutcome::Centers(_) => panic!("scaled marginal must be rejected"),
        }
    }

    #[test]
    fn one_sided_labels_fall_back_to_chow_origin() {
        let data = clean(3, 30_000, -20.0, 55);
        assert_eq!(data.label_counts().1, 0);
        let out = find_centers(&data, 0.05).unwrap();
        let centers = out.centers().expect("one-sided labels are not a rejection");
        assert_eq!(centers.len(), 1);
        assert_eq!(centers[0].source, CandidateSource::ChowPath);
        assert!(norm(&centers[0].point) < 1e-12);
    }

    #[test]
    fn chow_vector_recovers_direction_and_scale() {
        for (t_star, expected) in [(0.0, 0.797884560802865), (1.0, 0.483941449038287)] {
            let data = clean(5, 200_000, t_star, 56);
            let chow = chow_vector(&data);
            assert!(
                (chow[0] - expected).abs() < 0.02,
                "t* = {t_star}: chow = {chow:?}"
            );
            assert!(chow[1].abs() < 0.02);
        }
    }

    #[test]
    fn chow_grid_spacing_and_reach() {
        let data = clean(3, 100_000, 1.0, 57);
        let out = chow_center_search(&data, 0.1).unwrap();
        let centers = out.centers().unwrap();
        assert_eq!(centers.len(), 1001);
        let step = norm(&centers[1].point);
        assert!((step - 0.01).abs() < 1e-12);
        assert!((norm(&centers.last().unwrap().point) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn scrambled_labels_give_origin_only_chow() {
        let base = clean(4, 100_000, 0.0, 58);
        let mut data = LabeledDataset::new(4);
        for (i, (x, _)) in base.iter().enumerate() {
            data.push(x, if i % 2 == 0 { 1 } else { -1 });
        }
        let out = chow_center_search(&data, 0.05).unwrap();
        let centers = out.centers().unwrap();
        assert_eq!(centers.len(), 1);
        assert!(norm(&centers[0].point) < 1e-12);
    }

    #[test]
    fn center_quality_oracle() {
        let truth = Halfspace::axis(3, 0, -2.5);
        let on_boundary = CenterCandidate {
            point: vec![2.5, 0.0, 0.0],
            source: CandidateSource::TailMeanPlus,
            grid_index: 1000,
        };
        let (alpha, beta) = center_quality(&on_boundary, &truth);
        assert!(alpha.abs() < 1e-12);
        assert!((beta - 0.00620966532577614).abs() < 1e-12);

        let origin = CenterCandidate {
            point: vec![0.0; 3],
            source: CandidateSource::ChowPath,
            grid_index: 0,
        };
        let (alpha0, beta0) = center_quality(&origin, &truth);
        assert!((alpha0 - 2.5).abs() < 1e-12);
        assert!((beta0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn completeness_under_tail_noise() {
        let mut accepted = 0;
        for trial in 0..20 {
            let gen = generate(
                5,
                50_000,
                MarginalKind::StandardGaussian,
                &Halfspace::axis(5, 0, -1.0),
                NoiseProfile {
                    strategy: NoiseStrategy::TailFlip,
                    budget: 0.005,
                },
                600 + trial,
            )
            .unwrap();
            if !find_centers(&gen.data, 0.05).unwrap().is_reject() {
                accepted += 1;
            }
        }
        assert!(accepted >= 18, "accepted {accepted}/20");
    }
}
