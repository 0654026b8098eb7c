//! Acceptance gate for the workspace: each test certifies one promised
//! number or behavior at full scale and prints a single PASS/FAIL line.
//!
//! Every check is seeded, so a passing suite is reproducible bit for bit.
//! Reference values come from closed forms frozen here as constants, from
//! an in-file quadrature oracle, or from ground truth the generator knows.

use std::process::Command;
use std::time::Instant;

use halflearn::center_finder::{center_quality, chow_vector, find_centers, CenterOutcome};
use halflearn::learner::{boost_trial_count, boosted_learn, SampleSource};
use halflearn::localization::{
    reject_filter, reversion_error_bound, RejectionParams, ReversionBound,
};
use halflearn::seeding::{derive, role};
use halflearn::synth::{generate, MarginalKind, NoiseProfile, NoiseStrategy};
use halflearn::testers::{
    default_moment_tol, ks_test, test_covariance, test_mean, test_moments,
    test_trimmed_stability, wedge_bound_test,
};
use halflearn::{gaussian_tail, Halfspace, LabeledDataset, LearnConfig, Result};

use rand::prelude::*;
use rand_distr::StandardNormal;

const D: usize = 5;

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n}: {} {name} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance {n} {name}: {detail}");
}

fn clean(n: usize, t_star: f64, seed: u64) -> LabeledDataset {
    generate(
        D,
        n,
        MarginalKind::StandardGaussian,
        &Halfspace::axis(D, 0, -t_star),
        NoiseProfile::clean(),
        seed,
    )
    .expect("generation parameters are valid")
    .data
}

fn axis(k: usize) -> Vec<f64> {
    let mut v = vec![0.0; D];
    v[k] = 1.0;
    v
}

#[test]
fn a01_rejection_filter_law() {
    // Closed-form acceptance rate for the filter centered at 2e1 with
    // width 1/2: sigma * exp(-shift^2 / (2 (1 - sigma^2))).
    const RATE_2E1: f64 = 0.0347417256114008;
    let start = Instant::now();

    let data = clean(1_000_000, 0.0, 101);
    let p = RejectionParams::for_center(&[2.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let f = reject_filter(&data, &p, 9101);

    let mut failures: Vec<String> = Vec::new();
    if (f.accepted_fraction - RATE_2E1).abs() > 0.002 {
        failures.push(format!(
            "acceptance fraction {:.5} vs {RATE_2E1:.5}",
            f.accepted_fraction
        ));
    }
    let standardized: Vec<f64> = f.data.iter().map(|(x, _)| (x[0] - 2.0) / 0.5).collect();
    if !ks_test(&standardized, 0.03).is_accept() {
        failures.push("survivor projection along the center axis".into());
    }
    let orthogonal: Vec<f64> = f.data.iter().map(|(x, _)| x[1]).collect();
    if !ks_test(&orthogonal, 0.03).is_accept() {
        failures.push("orthogonal survivor coordinate".into());
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        failures.push(format!("took {secs:.1} s, budget 10 s"));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "fraction {:.5}, both survivor laws normal, {:.1} s",
            f.accepted_fraction, secs
        )
    } else {
        failures.join("; ")
    };
    report(1, "rejection filter law", ok, &detail);
}

#[test]
fn a02_label_correlation_identity() {
    // E[yx] for a halfspace with boundary at t along e1 is 2*pdf(t)*e1.
    let cases = [
        (0.0, 0.797884560802865356, 102u64),
        (1.0, 0.4839414490382867, 103),
        (2.0, 0.107981933026376104, 104),
    ];
    let mut failures: Vec<String> = Vec::new();
    let mut worst = 0.0f64;
    for &(t, two_pdf, seed) in &cases {
        let start = Instant::now();
        let data = clean(1_000_000, t, seed);
        let chow = chow_vector(&data);
        let diff: f64 = chow
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let target = if k == 0 { two_pdf } else { 0.0 };
                (c - target) * (c - target)
            })
            .sum::<f64>()
            .sqrt();
        worst = worst.max(diff);
        if diff > 0.02 {
            failures.push(format!("t = {t}: deviation {diff:.4}"));
        }
        let secs = start.elapsed().as_secs_f64();
        if secs >= 10.0 {
            failures.push(format!("t = {t}: took {secs:.1} s, budget 10 s"));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("worst deviation {worst:.4} over t in {{0, 1, 2}}")
    } else {
        failures.join("; ")
    };
    report(2, "label correlation identity", ok, &detail);
}

#[test]
fn a03_direction_reversion() {
    let mut failures: Vec<String> = Vec::new();

    // Exact round trips: push a unit target through the filter transform,
    // normalize, revert, and land back on the target.
    let mut rng = StdRng::seed_from_u64(303);
    let mut worst_exact = 0.0f64;
    for _ in 0..100 {
        let w: Vec<f64> = (0..D).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let sigma = rng.gen_range(0.2..0.9);
        let p = RejectionParams::centered(&w, sigma).unwrap();
        let vstar: Vec<f64> = {
            let raw: Vec<f64> = (0..D).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            halflearn::core::normalize(&raw)
        };
        let du = halflearn::core::dot(p.dir(), &vstar);
        let transformed: Vec<f64> = vstar
            .iter()
            .zip(p.dir())
            .map(|(&vi, &di)| vi + (sigma - 1.0) * du * di)
            .collect();
        let reverted = p.revert_direction(&halflearn::core::normalize(&transformed));
        let err: f64 = reverted
            .iter()
            .zip(&vstar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        worst_exact = worst_exact.max(err);
    }
    if worst_exact > 1e-9 {
        failures.push(format!("round-trip error {worst_exact:.2e} above 1e-9"));
    }

    // Perturbed instances: the realized error never exceeds the bound.
    let mut rng = StdRng::seed_from_u64(304);
    let mut violations = 0usize;
    let mut tightest = f64::INFINITY;
    for _ in 0..10_000 {
        let vstar: Vec<f64> = {
            let raw: Vec<f64> = (0..D).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            halflearn::core::normalize(&raw)
        };
        let beta_max = rng.gen_range(0.02..1.0);
        let bump: Vec<f64> = {
            let raw: Vec<f64> = (0..D).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            halflearn::core::normalize(&raw)
        };
        let r = rng.gen_range(0.0..beta_max);
        let w: Vec<f64> = vstar.iter().zip(&bump).map(|(&vi, &bi)| vi + r * bi).collect();
        let beta = {
            let diff: f64 = vstar
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            diff.max(1e-6)
        };
        let sigma = rng.gen_range(0.2..0.9);
        let p = RejectionParams::centered(&w, sigma).unwrap();

        let du = halflearn::core::dot(p.dir(), &vstar);
        let target: Vec<f64> = vstar
            .iter()
            .zip(p.dir())
            .map(|(&vi, &di)| vi + (sigma - 1.0) * du * di)
            .collect();
        let delta = rng.gen_range(0.0..0.1);
        let e: Vec<f64> = {
            let raw: Vec<f64> = (0..D).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            halflearn::core::normalize(&raw)
        };
        let learned: Vec<f64> = target.iter().zip(&e).map(|(&t, &ei)| t + delta * ei).collect();
        let reverted = p.revert_direction(&halflearn::core::normalize(&learned));
        let err: f64 = reverted
            .iter()
            .zip(&vstar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let bound = reversion_error_bound(&ReversionBound { delta, beta, sigma }).unwrap();
        if err > bound {
            violations += 1;
        } else if bound > 0.0 {
            tightest = tightest.min(bound - err);
        }
    }
    if violations > 0 {
        failures.push(format!("{violations} of 10000 instances exceeded the bound"));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!("round trips to {worst_exact:.1e}; 10000 perturbed instances under the bound")
    } else {
        failures.join("; ")
    };
    report(3, "direction reversion", ok, &detail);
}

#[test]
fn a04_tester_completeness() {
    let trials = 100usize;
    let n = 100_000usize;
    let mut accepts = [0usize; 6];
    for i in 0..trials {
        let data = clean(n, 1.0, 400 + i as u64);
        let proj = data.project(&axis(1));
        let checks = [
            test_mean(&data, 0.05).is_accept(),
            test_covariance(&data, 2.0).is_accept(),
            ks_test(&proj, 0.05).is_accept(),
            test_trimmed_stability(&proj, 0.05).is_accept(),
            test_moments(&data, 4, default_moment_tol(4, n)).unwrap().is_accept(),
            wedge_bound_test(&data, &axis(0), 0.05).is_accept(),
        ];
        for (slot, &passed) in accepts.iter_mut().zip(&checks) {
            *slot += usize::from(passed);
        }
    }
    let names = ["mean", "covariance", "kolmogorov", "trimmed", "moments", "wedge"];
    let mut failures: Vec<String> = Vec::new();
    for (name, &count) in names.iter().zip(&accepts) {
        if count < 99 {
            failures.push(format!("{name} accepted only {count}/100"));
        }
    }

    let mut center_accepts = 0usize;
    for i in 0..20 {
        let data = clean(200_000, 1.0, 450 + i);
        if matches!(find_centers(&data, 0.05).unwrap(), CenterOutcome::Centers(_)) {
            center_accepts += 1;
        }
    }
    if center_accepts < 18 {
        failures.push(format!("center search accepted only {center_accepts}/20"));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "single testers {:?}/100, center search {center_accepts}/20",
            accepts
        )
    } else {
        failures.join("; ")
    };
    report(4, "tester completeness", ok, &detail);
}

#[test]
fn a05_tester_soundness_on_foils() {
    let n = 100_000usize;
    let truth = Halfspace::axis(D, 0, -1.0);
    let mut scaled_rejects = 0usize;
    let mut mixture_rejects = 0usize;
    let mut cube_rejects = 0usize;
    for i in 0..20u64 {
        let scaled = generate(
            D,
            n,
            MarginalKind::ScaledGaussian(3f64.sqrt()),
            &truth,
            NoiseProfile::clean(),
            500 + i,
        )
        .unwrap()
        .data;
        scaled_rejects += usize::from(!test_covariance(&scaled, 2.0).is_accept());

        let mixture = generate(
            D,
            n,
            MarginalKind::TwoPointMixture(2.0),
            &truth,
            NoiseProfile::clean(),
            530 + i,
        )
        .unwrap()
        .data;
        let ks_caught = !ks_test(&mixture.project(&axis(0)), 0.05).is_accept();
        let moments_caught =
            !test_moments(&mixture, 4, default_moment_tol(4, n)).unwrap().is_accept();
        mixture_rejects += usize::from(ks_caught || moments_caught);

        let cube = generate(
            D,
            n,
            MarginalKind::UniformCube(3f64.sqrt()),
            &truth,
            NoiseProfile::clean(),
            560 + i,
        )
        .unwrap()
        .data;
        cube_rejects +=
            usize::from(!test_moments(&cube, 4, default_moment_tol(4, n)).unwrap().is_accept());
    }

    let mut failures: Vec<String> = Vec::new();
    if scaled_rejects < 19 {
        failures.push(format!("scaled covariance caught {scaled_rejects}/20"));
    }
    if mixture_rejects < 19 {
        failures.push(format!("two-point mixture caught {mixture_rejects}/20"));
    }
    if cube_rejects < 19 {
        failures.push(format!("uniform cube caught {cube_rejects}/20"));
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "scaled {scaled_rejects}/20, mixture {mixture_rejects}/20, cube {cube_rejects}/20"
        )
    } else {
        failures.join("; ")
    };
    report(5, "tester soundness on foils", ok, &detail);
}

#[test]
fn a06_center_list_contains_good_center() {
    let epsilon = 0.05;
    let spacing = epsilon * epsilon;
    let cells = [
        (1.0f64, 0.0f64),
        (1.0, 0.005),
        (2.0, 0.0),
        (2.0, 0.005),
        (2.5, 0.0),
        (2.5, 0.005),
    ];
    let mut failures: Vec<String> = Vec::new();
    let mut summaries: Vec<String> = Vec::new();
    for (cell, &(t_star, opt)) in cells.iter().enumerate() {
        let truth = Halfspace::axis(D, 0, -t_star);
        let mut good = 0usize;
        for trial in 0..20u64 {
            let noise = if opt > 0.0 {
                NoiseProfile::new(opt, NoiseStrategy::TailFlip).unwrap()
            } else {
                NoiseProfile::clean()
            };
            let data = generate(
                D,
                1_000_000,
                MarginalKind::StandardGaussian,
                &truth,
                noise,
                600 + 40 * cell as u64 + trial,
            )
            .unwrap()
            .data;
            let (plus, minus) = data.label_counts();
            let b_hat = plus.min(minus) as f64 / data.len() as f64;
            let centers = match find_centers(&data, epsilon).unwrap() {
                CenterOutcome::Centers(c) => c,
                CenterOutcome::Reject(_) => continue,
            };

            // List-size budgets: each tail ray is capped relative to the
            // observed minority mass, the correlation ray at its fixed reach.
            let tail_cap = (2.0 * (1.0 / b_hat).log2() / spacing).ceil() as usize + 9;
            let chow_cap = (10.0 / spacing).ceil() as usize + 1;
            let mut per_source = std::collections::HashMap::new();
            for c in &centers {
                *per_source.entry(format!("{:?}", c.source)).or_insert(0usize) += 1;
            }
            let mut cap_broken = false;
            for (source, count) in &per_source {
                let cap = if source.contains("Chow") { chow_cap } else { tail_cap };
                if *count > cap {
                    cap_broken = true;
                    failures.push(format!(
                        "cell (t*={t_star}, opt={opt}) trial {trial}: {source} holds {count} \
                         candidates, cap {cap}"
                    ));
                }
            }
            if cap_broken {
                continue;
            }

            let beta_floor = 0.05 * b_hat / (1.0 / b_hat).ln();
            let found = centers.iter().any(|c| {
                let (alpha, beta) = center_quality(c, &truth);
                alpha <= 0.02 && beta >= beta_floor
            });
            good += usize::from(found);
        }
        summaries.push(format!("(t*={t_star}, opt={opt}): {good}/20"));
        if good < 17 {
            failures.push(format!(
                "cell (t*={t_star}, opt={opt}): good center in only {good}/20 trials"
            ));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok {
        summaries.join(", ")
    } else {
        failures.join("; ")
    };
    report(6, "good center containment", ok, &detail);
}

// A quadrature oracle for the disagreement mass of two halfspaces under
// the standard Gaussian, written against the bivariate reduction rather
// than any code path it referees.
mod disagreement_oracle {
    use halflearn::gaussian_tail;

    const SQRT_2PI: f64 = 2.5066282746310002;

    fn pdf(x: f64) -> f64 {
        (-0.5 * x * x).exp() / SQRT_2PI
    }

    fn adaptive<F: Fn(f64) -> f64 + Copy>(
        f: F,
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
        let refined = left + right;
        if depth == 0 || (refined - whole).abs() <= 15.0 * tol {
            refined + (refined - whole) / 15.0
        } else {
            adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }

    fn integrate<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        adaptive(f, a, b, fa, fm, fb, whole, 1e-12, 60)
    }

    /// P[sign(x1 - t1) != sign(rho x1 + sqrt(1-rho^2) x2 - t2)] for
    /// (x1, x2) standard bivariate normal.
    pub fn disagreement(rho: f64, t1: f64, t2: f64) -> f64 {
        let s2 = 1.0 - rho * rho;
        if s2 < 1e-14 {
            return if rho > 0.0 {
                (gaussian_tail(t1) - gaussian_tail(t2)).abs()
            } else {
                // Second halfspace is +1 exactly when x1 <= -t2, so the two
                // agree on +1 only over [t1, -t2].
                if t1 > -t2 {
                    gaussian_tail(t1) + gaussian_tail(t2)
                } else {
                    2.0 - gaussian_tail(t1) - gaussian_tail(t2)
                }
            };
        }
        let s = s2.sqrt();
        let cut = t1.clamp(-9.0, 9.0);
        let below = integrate(
            move |x| pdf(x) * gaussian_tail((t2 - rho * x) / s),
            -9.0,
            cut,
        );
        let above = integrate(
            move |x| pdf(x) * (1.0 - gaussian_tail((t2 - rho * x) / s)),
            cut,
            9.0,
        );
        below + above
    }
}

#[test]
fn a07_disagreement_transfer() {
    use disagreement_oracle::disagreement;

    let mut failures: Vec<String> = Vec::new();

    // The oracle must reproduce the angle law for homogeneous rotations
    // and the shared tail function must match its frozen references.
    for &theta in &[0.05f64, 0.3, 1.0] {
        let d = disagreement(theta.cos(), 0.0, 0.0);
        if (d - theta / std::f64::consts::PI).abs() > 1e-9 {
            failures.push(format!("oracle misses the angle law at {theta}"));
        }
    }
    if (gaussian_tail(1.0) - 0.158655253931457051).abs() > 1e-9
        || (gaussian_tail(2.0) - 0.0227501319481792072).abs() > 1e-9
    {
        failures.push("tail function drifted from frozen references".into());
    }

    let eta = 0.05;
    let n = 100_000usize;
    let data = clean(n, 1.0, 700);
    if !wedge_bound_test(&data, &axis(0), eta).is_accept() {
        failures.push("clean data failed the band certificate".into());
    }

    // (angle, threshold shift, base threshold); parameter distance is
    // the direction gap plus the shift.
    let pairs = [
        (0.10f64, 0.00f64, 0.0f64),
        (0.00, 0.05, 1.0),
        (0.05, 0.02, 0.5),
        (0.02, 0.05, 1.0),
        (0.06, 0.02, 2.0),
    ];
    let mut max_gap_se = 0.0f64;
    for &(angle, shift, t) in &pairs {
        let v1 = axis(0);
        let mut v2 = vec![0.0; D];
        v2[0] = angle.cos();
        v2[1] = angle.sin();
        let (t1, t2) = (t, t + shift);
        let delta = 2.0 * (angle / 2.0).sin() + shift;
        assert!(delta <= 0.1 + 1e-12);

        let h1 = Halfspace::new(&v1, -t1).unwrap();
        let h2 = Halfspace::new(&v2, -t2).unwrap();
        let disagreements = data
            .iter()
            .filter(|(x, _)| h1.evaluate(x) != h2.evaluate(x))
            .count();
        let emp = disagreements as f64 / n as f64;

        if emp > 8.0 * (delta + eta) {
            failures.push(format!(
                "pair (angle {angle}, shift {shift}, t {t}): empirical {emp:.4} above the \
                 transfer bound {:.4}",
                8.0 * (delta + eta)
            ));
        }
        let oracle = disagreement(angle.cos(), t1, t2);
        let se = (oracle * (1.0 - oracle) / n as f64).sqrt();
        let gap = (emp - oracle).abs();
        max_gap_se = max_gap_se.max(gap / se);
        if gap > 3.0 * se {
            failures.push(format!(
                "pair (angle {angle}, shift {shift}, t {t}): empirical {emp:.5} vs oracle \
                 {oracle:.5} is {:.1} standard errors off",
                gap / se
            ));
        }
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!(
            "{} pairs within the transfer bound, worst oracle gap {:.2} standard errors",
            pairs.len(),
            max_gap_se
        )
    } else {
        failures.join("; ")
    };
    report(7, "disagreement transfer", ok, &detail);
}

#[test]
fn a08_sweep_error_bounds() {
    let exe = env!("CARGO_BIN_EXE_halflearn");
    let base = std::env::temp_dir().join(format!("halflearn-acceptance-{}", std::process::id()));
    let base_str = base.to_str().unwrap().to_string();

    let start = Instant::now();
    let status = Command::new(exe)
        .args([
            "sweep", "--d", "5", "--n", "1000000", "--epsilon", "0.05", "--tau", "0.05",
            "--seed", "8001", "--budget", "0,0.005,0.02", "--threshold", "0,1,2",
            "--adversary", "tail", "--trials", "20", "--out", &base_str,
        ])
        .status()
        .expect("sweep binary should launch");
    let elapsed = start.elapsed().as_secs_f64();

    let mut failures: Vec<String> = Vec::new();
    if !status.success() {
        failures.push(format!("sweep exited with {status}"));
    }
    if elapsed > 3600.0 {
        failures.push(format!("sweep took {:.0} s, budget 3600 s", elapsed));
    }

    let csv_path = format!("{base_str}.csv");
    let mut cells: std::collections::BTreeMap<(String, String), (usize, usize)> =
        std::collections::BTreeMap::new();
    if let Ok(body) = std::fs::read_to_string(&csv_path) {
        for line in body.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                failures.push(format!("malformed row {line:?}"));
                continue;
            }
            let budget: f64 = fields[0].parse().unwrap_or(f64::NAN);
            let key = (fields[0].to_string(), fields[1].to_string());
            let entry = cells.entry(key).or_insert((0, 0));
            entry.1 += 1;
            if fields[3] == "accept" {
                if let Ok(error) = fields[5].parse::<f64>() {
                    if error <= 10.0 * budget.sqrt() + 0.05 {
                        entry.0 += 1;
                    }
                }
            }
        }
    } else {
        failures.push(format!("missing report {csv_path}"));
    }

    if cells.len() != 9 {
        failures.push(format!("expected 9 cells, saw {}", cells.len()));
    }
    let mut summaries: Vec<String> = Vec::new();
    for ((budget, t_star), (passed, total)) in &cells {
        summaries.push(format!("({budget}, {t_star}): {passed}/{total}"));
        if *total != 20 {
            failures.push(format!("cell ({budget}, {t_star}) ran {total} trials"));
        }
        if *passed < 17 {
            failures.push(format!(
                "cell (budget {budget}, t* {t_star}): error bound held in only {passed}/{total}"
            ));
        }
    }

    let _ = std::fs::remove_file(&csv_path);
    let _ = std::fs::remove_file(format!("{base_str}.json"));

    let ok = failures.is_empty();
    let detail = if ok {
        format!("{}; {:.0} s total", summaries.join(", "), elapsed)
    } else {
        failures.join("; ")
    };
    report(8, "sweep error bounds", ok, &detail);
}

/// Hands out freshly generated samples, one derived seed per draw.
struct FreshSource {
    marginal: MarginalKind,
    truth: Halfspace,
    seed: u64,
    draws: u64,
}

impl SampleSource for FreshSource {
    fn draw(&mut self, n: usize) -> Result<LabeledDataset> {
        self.draws += 1;
        Ok(generate(
            D,
            n,
            self.marginal,
            &self.truth,
            NoiseProfile::clean(),
            derive(self.seed, role::TRIAL, self.draws),
        )?
        .data)
    }
}

#[test]
fn a09_confidence_boosting() {
    let mut failures: Vec<String> = Vec::new();
    if boost_trial_count(0.05) != 30 {
        failures.push(format!(
            "trial count {} at confidence 0.05, expected 30",
            boost_trial_count(0.05)
        ));
    }

    let mut clean_accepts = 0usize;
    let mut cube_rejects = 0usize;
    for k in 0..10u64 {
        let config = LearnConfig::new(0.1, 0.05, 9500 + k).unwrap();
        let mut source = FreshSource {
            marginal: MarginalKind::StandardGaussian,
            truth: Halfspace::axis(D, 0, -1.0),
            seed: 9100 + k,
            draws: 0,
        };
        let out = boosted_learn(&mut source, 20_000, &config).unwrap();
        clean_accepts += usize::from(out.is_accept());

        let mut foil = FreshSource {
            marginal: MarginalKind::UniformCube(3f64.sqrt()),
            truth: Halfspace::axis(D, 0, -1.0),
            seed: 9300 + k,
            draws: 0,
        };
        let out = boosted_learn(&mut foil, 20_000, &config).unwrap();
        cube_rejects += usize::from(!out.is_accept());
    }
    if clean_accepts < 10 {
        failures.push(format!("clean meta-runs accepted {clean_accepts}/10"));
    }
    if cube_rejects < 10 {
        failures.push(format!("cube meta-runs rejected {cube_rejects}/10"));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!("clean {clean_accepts}/10 accepted, cube {cube_rejects}/10 rejected")
    } else {
        failures.join("; ")
    };
    report(9, "confidence boosting", ok, &detail);
}

#[test]
fn a10_sweep_determinism() {
    let exe = env!("CARGO_BIN_EXE_halflearn");
    let tmp = std::env::temp_dir();
    let base_a = tmp.join(format!("halflearn-det-a-{}", std::process::id()));
    let base_b = tmp.join(format!("halflearn-det-b-{}", std::process::id()));

    let run = |base: &std::path::Path| -> std::process::ExitStatus {
        Command::new(exe)
            .args([
                "sweep", "--n", "20000", "--epsilon", "0.1", "--seed", "55", "--budget",
                "0,0.01", "--threshold", "0,1", "--trials", "2", "--out",
                base.to_str().unwrap(),
            ])
            .status()
            .expect("sweep binary should launch")
    };
    let status_a = run(&base_a);
    let status_b = run(&base_b);

    let mut failures: Vec<String> = Vec::new();
    if !status_a.success() || !status_b.success() {
        failures.push("a sweep run failed".into());
    }
    let read = |base: &std::path::Path, ext: &str| {
        std::fs::read(format!("{}.{ext}", base.to_str().unwrap())).unwrap_or_default()
    };
    let csv_a = read(&base_a, "csv");
    if csv_a.is_empty() {
        failures.push("first run produced no rows".into());
    }
    if csv_a != read(&base_b, "csv") {
        failures.push("repeated runs differ in their trial rows".into());
    }
    if read(&base_a, "json") != read(&base_b, "json") {
        failures.push("repeated runs differ in their summaries".into());
    }

    for base in [&base_a, &base_b] {
        let _ = std::fs::remove_file(format!("{}.csv", base.to_str().unwrap()));
        let _ = std::fs::remove_file(format!("{}.json", base.to_str().unwrap()));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        format!("two runs, {} identical report bytes", csv_a.len())
    } else {
        failures.join("; ")
    };
    report(10, "sweep determinism", ok, &detail);
}
