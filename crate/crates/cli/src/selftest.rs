//! `selftest`: exercises the statistical contracts end to end and prints
//! one line per property.
//!
//! These are the checks a skeptical user would want before trusting a
//! verdict: the rejection filter produces the survivor law it claims (and
//! visibly fails when its exponent sign is flipped), estimated directions
//! revert through the localization transform, the wedge disagreement
//! matches an independent quadrature oracle, and the full pipeline accepts
//! clean Gaussian data while rejecting a moment-matched impostor.

use std::panic::catch_unwind;

use halflearn::center_finder::{center_quality, find_centers, chow_vector, CenterOutcome};
use halflearn::core::{dot, norm, normalize};
use halflearn::learner::{testable_learn, LearnVerdict};
use halflearn::localization::{
    filter_with, reject_filter, reversion_error_bound, RejectionParams, ReversionBound,
};
use halflearn::seeding::stream;
use halflearn::synth::{generate, MarginalKind, NoiseProfile, NoiseStrategy};
use halflearn::testers::{
    default_moment_tol, ks_test, test_covariance, test_mean, test_moments,
    test_trimmed_stability, wedge_bound_test,
};
use halflearn::{
    gaussian_pdf, gaussian_tail, gaussian_tail_inv, Halfspace, LabeledDataset, LearnConfig,
    TesterVerdict,
};
use rand::Rng;
use rand_distr::StandardNormal;

const PHI_1: f64 = 0.158655253931457051;
const PHI_2: f64 = 0.0227501319481792072;
const PHI_2_5: f64 = 0.00620966532577613517;
const RATE_E1: f64 = 0.260130047511444;
const RATE_2E1: f64 = 0.0347417256114008;
const RATE_3E1: f64 = 0.00210990514249525;
const TWO_G_0: f64 = 0.797884560802865356;
const TWO_G_1: f64 = 0.483941449038286700;

type Check = fn() -> Result<String, String>;

pub fn run() -> i32 {
    let checks: &[(&str, Check)] = &[
        ("tail-values", tail_values),
        ("tail-shift-inequality", tail_shift_inequality),
        ("noise-budget", noise_budget),
        ("rejection-law", rejection_law),
        ("rejection-sign-mutation", rejection_sign_mutation),
        ("acceptance-rate", acceptance_rate),
        ("chow-identity", chow_identity),
        ("reversion-round-trip", reversion_round_trip),
        ("reversion-error-bound", reversion_bound_holds),
        ("tester-completeness", tester_completeness),
        ("tester-soundness", tester_soundness),
        ("wedge-oracle", wedge_oracle),
        ("center-containment", center_containment),
        ("pipeline-clean", pipeline_clean),
        ("pipeline-foil", pipeline_foil),
        ("determinism", determinism),
    ];
    let mut failures = 0usize;
    for (name, check) in checks {
        match catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(detail)) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
            Err(_) => {
                failures += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    println!("{} properties, {} failed", checks.len(), failures);
    if failures == 0 {
        0
    } else {
        1
    }
}

fn clean(d: usize, n: usize, t_star: f64, seed: u64) -> LabeledDataset {
    generate(
        d,
        n,
        MarginalKind::StandardGaussian,
        &Halfspace::axis(d, 0, -t_star),
        NoiseProfile::clean(),
        seed,
    )
    .expect("clean generation")
    .data
}

fn fail(msg: String) -> Result<String, String> {
    Err(msg)
}

fn tail_values() -> Result<String, String> {
    for (x, want) in [(1.0, PHI_1), (2.0, PHI_2), (2.5, PHI_2_5)] {
        let got = gaussian_tail(x);
        if (got - want).abs() > 1e-10 {
            return fail(format!("tail({x}) = {got:.15}, want {want:.15}"));
        }
        let back = gaussian_tail_inv(want);
        if (back - x).abs() > 1e-8 {
            return fail(format!("tail_inv(tail({x})) = {back}"));
        }
    }
    Ok("tail mass at 1, 2, 2.5 matches references to 1e-10 and inverts".into())
}

fn tail_shift_inequality() -> Result<String, String> {
    // Far out in the tail, moving the threshold inward by 1/x keeps at
    // least a tenth of the mass. This is what lets a localization center
    // sit slightly off the boundary without losing the minority labels.
    let mut worst = f64::INFINITY;
    let mut worst_x = 0.0;
    for i in 0..=100 {
        let x = 10.0 + 0.1 * i as f64;
        let ratio = gaussian_tail(x + 1.0 / x) / gaussian_tail(x);
        if ratio < worst {
            worst = ratio;
            worst_x = x;
        }
    }
    if worst < 0.1 {
        return fail(format!("ratio {worst:.4} at x = {worst_x} drops below 0.1"));
    }
    Ok(format!(
        "tail(x + 1/x) >= 0.1 tail(x) on [10, 20]; min ratio {worst:.3} at x = {worst_x}"
    ))
}

fn noise_budget() -> Result<String, String> {
    let truth = Halfspace::axis(3, 0, 0.0);
    for strategy in [
        NoiseStrategy::BoundaryFlip,
        NoiseStrategy::TailFlip,
        NoiseStrategy::RandomFlip,
    ] {
        let g = generate(
            3,
            10_000,
            MarginalKind::StandardGaussian,
            &truth,
            NoiseProfile::new(0.02, strategy).expect("valid budget"),
            31,
        )
        .expect("generation");
        if g.realized_flips != 200 {
            return fail(format!(
                "{strategy:?} flipped {} labels, want 200",
                g.realized_flips
            ));
        }
    }
    Ok("every adversary realizes exactly floor(0.02 n) = 200 flips".into())
}

fn rejection_law() -> Result<String, String> {
    let d = 5;
    let data = clean(d, 200_000, 0.0, 41);
    let mut w = vec![0.0; d];
    w[0] = 2.0;
    let p = RejectionParams::for_center(&w).expect("center params");
    let filtered = reject_filter(&data, &p, 42);

    if (filtered.accepted_fraction - RATE_2E1).abs() > 0.004 {
        return fail(format!(
            "acceptance fraction {:.5}, want {RATE_2E1:.5} +- 0.004",
            filtered.accepted_fraction
        ));
    }
    let along: Vec<f64> = filtered
        .data
        .iter()
        .map(|(x, _)| (dot(x, p.dir()) - 2.0) / 0.5)
        .collect();
    if let TesterVerdict::Reject(diag) = ks_test(&along, 0.03) {
        return fail(format!("survivor law along the center: {}", diag.message));
    }
    let across: Vec<f64> = filtered.data.iter().map(|(x, _)| x[1]).collect();
    if let TesterVerdict::Reject(diag) = ks_test(&across, 0.03) {
        return fail(format!("survivor law across the center: {}", diag.message));
    }
    Ok(format!(
        "fraction {:.5} matches {RATE_2E1:.5}; survivors Gaussian along and across (KS <= 0.03, n = {})",
        filtered.accepted_fraction,
        filtered.data.len()
    ))
}

fn rejection_sign_mutation() -> Result<String, String> {
    // Flip the sign of the acceptance exponent and the filter stops being
    // a probability at all: the expression is >= 1 everywhere, every point
    // survives, and the survivor law check fails loudly. This is the check
    // that pins the sign convention.
    let d = 5;
    let data = clean(d, 200_000, 0.0, 41);
    let mut w = vec![0.0; d];
    w[0] = 2.0;
    let p = RejectionParams::for_center(&w).expect("center params");
    let flipped = filter_with(&data, 42, |x| p.exponent_at(dot(x, p.dir())).exp().min(1.0));

    let along: Vec<f64> = flipped
        .data
        .iter()
        .map(|(x, _)| (dot(x, p.dir()) - 2.0) / 0.5)
        .collect();
    match ks_test(&along, 0.1) {
        TesterVerdict::Accept => fail(format!(
            "sign-flipped filter went unnoticed (accepted fraction {:.3})",
            flipped.accepted_fraction
        )),
        TesterVerdict::Reject(diag) => Ok(format!(
            "sign-flipped filter keeps {:.0}% of points and breaks the survivor law (KS {:.2})",
            100.0 * flipped.accepted_fraction,
            diag.statistic
        )),
    }
}

fn acceptance_rate() -> Result<String, String> {
    let d = 5;
    let data = clean(d, 200_000, 0.0, 43);
    let cases = [(1.0, RATE_E1, 0.005), (3.0, RATE_3E1, 0.0005)];
    let mut details = Vec::new();
    for (len, want, tol) in cases {
        let mut w = vec![0.0; d];
        w[0] = len;
        let p = RejectionParams::for_center(&w).expect("center params");
        if (p.acceptance_rate() - want).abs() > 1e-12 {
            return fail(format!(
                "closed-form rate for |w| = {len}: {:.15}, want {want:.15}",
                p.acceptance_rate()
            ));
        }
        let got = reject_filter(&data, &p, 44).accepted_fraction;
        if (got - want).abs() > tol {
            return fail(format!(
                "empirical rate for |w| = {len}: {got:.5}, want {want:.5} +- {tol}"
            ));
        }
        details.push(format!("|w| = {len}: {got:.5} vs {want:.5}"));
    }
    Ok(details.join("; "))
}

fn chow_identity() -> Result<String, String> {
    if (2.0 * gaussian_pdf(0.0) - TWO_G_0).abs() > 1e-12
        || (2.0 * gaussian_pdf(1.0) - TWO_G_1).abs() > 1e-12
    {
        return fail("Gaussian density drifted from its reference values".into());
    }
    let d = 5;
    for (i, t) in [0.0, 1.0, 2.0].into_iter().enumerate() {
        let data = clean(d, 200_000, t, 51 + i as u64);
        let chow = chow_vector(&data);
        let scale = 2.0 * gaussian_pdf(t);
        let mut diff = chow.clone();
        diff[0] -= scale;
        if norm(&diff) > 0.03 {
            return fail(format!(
                "t = {t}: |E[yx] - 2G(t)e1| = {:.4} exceeds 0.03",
                norm(&diff)
            ));
        }
    }
    Ok("E[yx] matches 2G(t)v at t = 0, 1, 2 within 0.03".into())
}

fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    normalize(&v)
}

fn reversion_round_trip() -> Result<String, String> {
    let mut rng = stream(61, 0, 0);
    for trial in 0..100 {
        let d = 4;
        let len = rng.gen_range(0.3..3.0);
        let w: Vec<f64> = random_unit(&mut rng, d).iter().map(|c| c * len).collect();
        let vstar = random_unit(&mut rng, d);
        let p = RejectionParams::for_center(&w).expect("center params");
        let moved = p
            .transformed_halfspace(&Halfspace::new(&vstar, 0.0).expect("unit direction"))
            .expect("transform");
        let back = p.revert_direction(moved.direction());
        let err: f64 = back
            .iter()
            .zip(&vstar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if err > 1e-9 {
            return fail(format!("trial {trial}: round-trip error {err:.2e}"));
        }
    }
    Ok("100 random transforms revert to the original direction within 1e-9".into())
}

fn reversion_bound_holds() -> Result<String, String> {
    let mut rng = stream(62, 0, 0);
    let d = 4;
    let mut largest_slack = 0.0f64;
    for trial in 0..2000 {
        let vstar = random_unit(&mut rng, d);
        let beta = rng.gen_range(0.02..1.0);
        let bump = random_unit(&mut rng, d);
        let r = rng.gen_range(0.0..beta);
        let w: Vec<f64> = vstar.iter().zip(&bump).map(|(v, b)| v + r * b).collect();
        let beta_actual = vstar
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            .max(1e-6);
        let sigma = rng.gen_range(0.2..0.9);
        let p = RejectionParams::centered(&w, sigma).expect("params");

        let du = dot(p.dir(), &vstar);
        let target: Vec<f64> = vstar
            .iter()
            .zip(p.dir())
            .map(|(&vi, &di)| vi + (sigma - 1.0) * du * di)
            .collect();
        let delta = rng.gen_range(0.0..0.1);
        let e = random_unit(&mut rng, d);
        let learned: Vec<f64> = target.iter().zip(&e).map(|(&t, &ei)| t + delta * ei).collect();

        let reverted = p.revert_direction(&normalize(&learned));
        let err: f64 = reverted
            .iter()
            .zip(&vstar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let bound = reversion_error_bound(&ReversionBound {
            delta,
            beta: beta_actual,
            sigma,
        })
        .expect("bound inputs in range");
        if err > bound {
            return fail(format!(
                "trial {trial}: error {err:.4} exceeds bound {bound:.4}"
            ));
        }
        largest_slack = largest_slack.max(err / bound.max(1e-300));
    }
    Ok(format!(
        "2000 perturbed instances stay under the bound (tightest ratio {largest_slack:.3})"
    ))
}

fn tester_completeness() -> Result<String, String> {
    let data = clean(5, 50_000, 1.0, 71);
    let proj: Vec<f64> = data.iter().map(|(x, _)| x[0]).collect();
    let e1 = {
        let mut v = vec![0.0; 5];
        v[0] = 1.0;
        v
    };
    let checks: Vec<(&str, TesterVerdict)> = vec![
        ("mean", test_mean(&data, 0.05)),
        ("covariance", test_covariance(&data, 2.0)),
        (
            "moments",
            test_moments(&data, 4, default_moment_tol(4, data.len())).expect("moment budget"),
        ),
        ("kolmogorov", ks_test(&proj, 0.03)),
        ("trimmed", test_trimmed_stability(&proj, 0.05)),
        ("wedge", wedge_bound_test(&data, &e1, 0.1)),
    ];
    for (name, verdict) in &checks {
        if let TesterVerdict::Reject(diag) = verdict {
            return fail(format!("{name} rejected clean data: {}", diag.message));
        }
    }
    Ok(format!("all {} testers accept clean Gaussian data", checks.len()))
}

fn tester_soundness() -> Result<String, String> {
    let truth = Halfspace::axis(5, 0, 0.0);
    let foil = |kind| {
        generate(5, 50_000, kind, &truth, NoiseProfile::clean(), 72)
            .expect("generation")
            .data
    };

    let scaled = foil(MarginalKind::ScaledGaussian(3f64.sqrt()));
    if test_covariance(&scaled, 2.0).is_accept() {
        return fail("covariance test missed the inflated Gaussian".into());
    }

    let mixture = foil(MarginalKind::TwoPointMixture(2.0));
    let proj: Vec<f64> = mixture.iter().map(|(x, _)| x[0]).collect();
    if ks_test(&proj, 0.03).is_accept() {
        return fail("Kolmogorov test missed the two-point mixture".into());
    }
    if test_moments(&mixture, 4, default_moment_tol(4, mixture.len()))
        .expect("moment budget")
        .is_accept()
    {
        return fail("moment test missed the two-point mixture".into());
    }

    let cube = foil(MarginalKind::UniformCube(3f64.sqrt()));
    if test_moments(&cube, 4, default_moment_tol(4, cube.len()))
        .expect("moment budget")
        .is_accept()
    {
        return fail("moment test missed the matched-covariance cube".into());
    }
    Ok("inflated, two-point, and cube impostors are each caught by the named tester".into())
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Probability that sign(g1 + t1) and sign(g2 + t2) differ when (g1, g2)
/// are standard Gaussians with correlation `rho`: the inner variable is
/// integrated in closed form, the outer by adaptive Simpson split at the
/// integrand's one discontinuity.
fn disagreement_oracle(rho: f64, t1: f64, t2: f64) -> f64 {
    let s2 = 1.0 - rho * rho;
    if s2 < 1e-14 {
        return if rho > 0.0 {
            (gaussian_tail(-t1) - gaussian_tail(-t2)).abs()
        } else {
            let hi = gaussian_tail((-t1).max(t2));
            let lo = 1.0 - gaussian_tail((-t1).min(t2));
            hi + lo
        };
    }
    let s = s2.sqrt();
    let f = move |x: f64| {
        let z = (-t2 - rho * x) / s;
        let cross = if x + t1 >= 0.0 {
            1.0 - gaussian_tail(z)
        } else {
            gaussian_tail(z)
        };
        gaussian_pdf(x) * cross
    };
    let cut = (-t1).clamp(-9.0, 9.0);
    adaptive_simpson(&f, -9.0, cut, 1e-12) + adaptive_simpson(&f, cut, 9.0, 1e-12)
}

fn wedge_oracle() -> Result<String, String> {
    // Anchor the oracle itself first: two homogeneous halfspaces at angle
    // theta disagree on exactly theta/pi of the Gaussian.
    for theta in [0.05, 0.3, 1.0] {
        let want = theta / std::f64::consts::PI;
        let got = disagreement_oracle(theta.cos(), 0.0, 0.0);
        if (got - want).abs() > 1e-9 {
            return fail(format!(
                "oracle drift at theta = {theta}: {got:.12} vs {want:.12}"
            ));
        }
    }

    let d = 5;
    let n = 100_000;
    let data = clean(d, n, 0.0, 73);
    let e1 = {
        let mut v = vec![0.0; d];
        v[0] = 1.0;
        v
    };
    let eta = 0.05;
    if let TesterVerdict::Reject(diag) = wedge_bound_test(&data, &e1, eta) {
        return fail(format!("wedge gate rejected clean data: {}", diag.message));
    }

    let mut details = Vec::new();
    for (delta, t) in [(0.02f64, 0.0), (0.05, 0.5), (0.1, 1.0)] {
        let h1 = Halfspace::new(&e1, t).expect("unit direction");
        let mut v2 = vec![0.0; d];
        v2[0] = delta.cos();
        v2[1] = delta.sin();
        let t2 = t + 0.5 * delta;
        let h2 = Halfspace::new(&v2, t2).expect("unit direction");

        let emp = data
            .iter()
            .filter(|&(x, _)| h1.evaluate(x) != h2.evaluate(x))
            .count() as f64
            / n as f64;
        let oracle = disagreement_oracle(delta.cos(), t, t2);
        let se = (oracle * (1.0 - oracle) / n as f64).sqrt();
        if (emp - oracle).abs() > 3.0 * se {
            return fail(format!(
                "delta = {delta}, t = {t}: empirical {emp:.5} is {:.1} SEs from oracle {oracle:.5}",
                (emp - oracle).abs() / se
            ));
        }
        if emp > 8.0 * (delta + eta) {
            return fail(format!(
                "delta = {delta}, t = {t}: disagreement {emp:.4} breaks the 8(delta + eta) bound"
            ));
        }
        details.push(format!("d{delta}: {emp:.4}~{oracle:.4}"));
    }
    Ok(format!(
        "disagreement within 3 SEs of quadrature and under 8(delta + eta) [{}]",
        details.join(", ")
    ))
}

fn center_containment() -> Result<String, String> {
    let data = clean(5, 200_000, 2.0, 81);
    let truth = Halfspace::axis(5, 0, -2.0);
    let centers = match find_centers(&data, 0.05).expect("finder ran") {
        CenterOutcome::Reject(diag) => {
            return fail(format!("clean data rejected: {}", diag.message))
        }
        CenterOutcome::Centers(c) => c,
    };
    let minority = data
        .iter()
        .filter(|&(_, y)| y > 0)
        .count()
        .min(data.iter().filter(|&(_, y)| y < 0).count()) as f64
        / data.len() as f64;
    let beta_floor = 0.05 * minority / (1.0 / minority).ln();

    let mut best: Option<(f64, f64)> = None;
    for c in &centers {
        let (alpha, beta) = center_quality(c, &truth);
        if beta >= beta_floor && best.map_or(true, |(a, _)| alpha < a) {
            best = Some((alpha, beta));
        }
    }
    match best {
        Some((alpha, beta)) if alpha <= 0.05 => Ok(format!(
            "{} candidates include a center at hyperplane distance {alpha:.4} with mass {beta:.4}",
            centers.len()
        )),
        Some((alpha, _)) => fail(format!(
            "best qualifying candidate sits {alpha:.4} from the hyperplane (want <= 0.05)"
        )),
        None => fail("no candidate keeps enough Gaussian mass".into()),
    }
}

fn pipeline_clean() -> Result<String, String> {
    let data = clean(5, 200_000, 1.0, 91);
    let config = LearnConfig::new(0.1, 0.05, 91).expect("valid config");
    let outcome = testable_learn(&data, &config).expect("run completed");
    match outcome.verdict {
        LearnVerdict::Accept(acc) if acc.test_error <= 0.1 => Ok(format!(
            "clean shifted data accepted with holdout error {:.4}",
            acc.test_error
        )),
        LearnVerdict::Accept(acc) => fail(format!(
            "accepted but holdout error {:.4} exceeds epsilon = 0.1",
            acc.test_error
        )),
        LearnVerdict::Reject(diag) => fail(format!("clean data rejected: {}", diag.message)),
    }
}

fn pipeline_foil() -> Result<String, String> {
    let truth = Halfspace::axis(5, 0, 0.0);
    let data = generate(
        5,
        50_000,
        MarginalKind::UniformCube(3f64.sqrt()),
        &truth,
        NoiseProfile::clean(),
        92,
    )
    .expect("generation")
    .data;
    let config = LearnConfig::new(0.1, 0.05, 92).expect("valid config");
    let outcome = testable_learn(&data, &config).expect("run completed");
    match outcome.verdict {
        LearnVerdict::Reject(diag) => Ok(format!(
            "moment-matched cube rejected by the {} check",
            diag.check
        )),
        LearnVerdict::Accept(_) => fail("the cube impostor was accepted".into()),
    }
}

fn determinism() -> Result<String, String> {
    let data = clean(5, 50_000, 1.0, 93);
    let config = LearnConfig::new(0.1, 0.05, 93).expect("valid config");
    let a = testable_learn(&data, &config).expect("first run");
    let b = testable_learn(&data, &config).expect("second run");
    if format!("{:?}", a.verdict) != format!("{:?}", b.verdict) {
        return fail("two runs with one seed differ".into());
    }
    Ok("repeated runs with one seed are bit-identical".into())
}
