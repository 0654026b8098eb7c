//! End-to-end checks on data whose right answer is known in closed form.

use halflearn::learner::{testable_learn, Hypothesis, LearnVerdict};
use halflearn::localization::{reject_filter, RejectionParams};
use halflearn::synth::{generate, MarginalKind, NoiseProfile};
use halflearn::testers::ks_test;
use halflearn::{gaussian_tail, Halfspace, LabeledDataset, LearnConfig};

fn clean_gaussian(n: usize, t_star: f64, seed: u64) -> LabeledDataset {
    generate(
        5,
        n,
        MarginalKind::StandardGaussian,
        &Halfspace::axis(5, 0, -t_star),
        NoiseProfile::clean(),
        seed,
    )
    .expect("generation parameters are valid")
    .data
}

#[test]
fn recovers_homogeneous_halfspace() {
    let data = clean_gaussian(150_000, 0.0, 21);
    let config = LearnConfig::new(0.1, 0.1, 22).unwrap();
    let out = testable_learn(&data, &config).unwrap();
    let acc = out.accepted().expect("clean balanced data should be accepted");
    assert!(
        acc.test_error <= 0.1,
        "holdout error {} above the accuracy budget",
        acc.test_error
    );
    match &acc.chosen {
        Hypothesis::Halfspace(h) => {
            assert!(
                h.direction()[0] > 0.99,
                "direction {:?} strayed from the true axis",
                h.direction()
            );
            assert!(
                h.threshold().abs() < 0.15,
                "threshold {} far from the true boundary at zero",
                h.threshold()
            );
        }
        Hypothesis::Constant(_) => panic!("balanced labels should never favor a constant"),
    }
}

#[test]
fn rejects_inflated_covariance_before_learning() {
    let gen = generate(
        5,
        50_000,
        MarginalKind::ScaledGaussian(3f64.sqrt()),
        &Halfspace::axis(5, 0, -1.0),
        NoiseProfile::clean(),
        23,
    )
    .unwrap();
    let config = LearnConfig::new(0.1, 0.1, 24).unwrap();
    let out = testable_learn(&gen.data, &config).unwrap();
    match &out.verdict {
        LearnVerdict::Reject(diag) => assert_eq!(diag.check, "covariance"),
        LearnVerdict::Accept(_) => panic!("inflated covariance must not be accepted"),
    }
}

#[test]
fn survivor_law_matches_closed_form() {
    const RATE_E1: f64 = 0.260130047511444;
    let data = clean_gaussian(200_000, 0.0, 31);
    let p = RejectionParams::for_center(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let f = reject_filter(&data, &p, 9031);
    assert!(
        (f.accepted_fraction - RATE_E1).abs() < 0.005,
        "acceptance fraction {} off the closed-form rate {}",
        f.accepted_fraction,
        RATE_E1
    );
    let sigma = p.sigma();
    let standardized: Vec<f64> = f.data.iter().map(|(x, _)| (x[0] - 1.0) / sigma).collect();
    assert!(
        ks_test(&standardized, 0.03).is_accept(),
        "survivor projection strays from the target normal law"
    );
    let orthogonal: Vec<f64> = f.data.iter().map(|(x, _)| x[2]).collect();
    assert!(
        ks_test(&orthogonal, 0.03).is_accept(),
        "orthogonal survivor coordinate strays from standard normal"
    );
}

#[test]
fn deep_tail_shift_ratio_stays_bounded() {
    // Φ̄(t + 1/t) / Φ̄(t) tends to e^{-1} as t grows; nothing in the deep
    // tail may drive it under the 0.1 floor the localization math leans on.
    let mut min_ratio = f64::INFINITY;
    let mut t = 10.0;
    while t <= 20.0 {
        let ratio = gaussian_tail(t + 1.0 / t) / gaussian_tail(t);
        assert!(ratio > 0.1, "shift ratio {ratio} at t = {t} below floor");
        min_ratio = min_ratio.min(ratio);
        t += 0.5;
    }
    assert!(
        (0.35..0.38).contains(&min_ratio),
        "minimum shift ratio {min_ratio} outside the expected window"
    );
}
