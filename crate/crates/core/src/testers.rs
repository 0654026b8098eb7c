//! Distribution tests that certify a sample before its statistics are used.
//!
//! Every test is two-sided in spirit but one-sided in consequence: passing
//! says "the estimates downstream would also have passed on a genuine
//! Gaussian", failing names the offending statistic. Verdicts are
//! deterministic functions of the input sample.
//!
//! The workhorses:
//!
//! * [`test_covariance`]: largest eigenvalue of Ê[xxᵀ] under a bound.
//! * [`test_mean`]: ‖Ê[x]‖₂ under a bound.
//! * [`ks_test`]: exact Kolmogorov distance between a projection's
//!   empirical law and N(0,1), evaluated at the order statistics.
//! * [`test_trimmed_stability`]: the mean must not move when the extreme
//!   ⌊εn⌋ values on either side are dropped.
//! * [`test_moments`]: all monomial moments up to a degree cap against
//!   their Gaussian values.
//! * [`wedge_bound_test`]: band masses along a direction plus a covariance
//!   bound orthogonal to it; certifies that small-angle wedges around the
//!   direction carry near-Gaussian mass.

use crate::core::{gaussian_tail, gershgorin_upper, spectral_upper, LabeledDataset, SymMat, TesterVerdict};
use crate::error::{Error, Result};

/// Tolerance bundle with the defaults the pipeline uses.
#[derive(Debug, Clone, PartialEq)]
pub struct TestTolerances {
    /// Kolmogorov / mean / stability tolerance.
    pub epsilon: f64,
    /// Wedge-test band tolerance.
    pub eta: f64,
    /// Maximum moment degree.
    pub k: usize,
    /// Absolute moment slack; `None` derives it from the sample size.
    pub moment_tol: Option<f64>,
}

impl Default for TestTolerances {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            eta: 0.1,
            k: 4,
            moment_tol: None,
        }
    }
}

impl TestTolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v, lo, hi) in [
            ("epsilon", self.epsilon, 0.0, 0.5),
            ("eta", self.eta, 0.0, 0.5),
        ] {
            if !(v > lo && v < hi) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be in (0, 0.5)",
                });
            }
        }
        if self.k < 2 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: self.k as f64,
                reason: "moment degree must be at least 2",
            });
        }
        Ok(())
    }

    /// Moment slack for a sample of size `n`: ten standard deviations of the
    /// widest monomial at the Gaussian, i.e. `10 · max-moment / √n`.
    pub fn moment_tol_for(&self, n: usize) -> f64 {
        self.moment_tol
            .unwrap_or_else(|| default_moment_tol(self.k, n))
    }
}

/// `10 · (largest Gaussian moment of degree ≤ k) / √n`.
pub fn default_moment_tol(k: usize, n: usize) -> f64 {
    10.0 * max_gaussian_moment(k) / (n.max(1) as f64).sqrt()
}

fn max_gaussian_moment(k: usize) -> f64 {
    // Largest |E[x^α]| over monomials of degree ≤ k is the largest even
    // single-coordinate moment: (2⌊k/2⌋ − 1)!!.
    double_factorial(2 * (k / 2) as i64 - 1)
}

fn double_factorial(mut m: i64) -> f64 {
    let mut out = 1.0;
    while m > 1 {
        out *= m as f64;
        m -= 2;
    }
    out
}

/// Accepts iff the top eigenvalue of Ê[xxᵀ] is at most `bound`.
pub fn test_covariance(data: &LabeledDataset, bound: f64) -> TesterVerdict {
    assert!(!data.is_empty(), "covariance test on an empty dataset");
    let (m, _) = SymMat::second_moment(data.dim(), data.iter().map(|(x, _)| x));
    // The disc bound is already below the line for near-isotropic data, which
    // is also where power iteration crawls, so try it first.
    if gershgorin_upper(&m) <= bound {
        return TesterVerdict::Accept;
    }
    let lambda = match spectral_upper(&m, 1e-5) {
        Ok(l) => l,
        Err(e) => {
            return TesterVerdict::reject(
                "covariance",
                f64::NAN,
                format!("spectral bound did not converge: {e}"),
            )
        }
    };
    if lambda <= bound {
        TesterVerdict::Accept
    } else {
        TesterVerdict::reject(
            "covariance",
            lambda,
            format!("second-moment spectral norm {lambda:.4} exceeds {bound}"),
        )
    }
}

/// Accepts iff ‖Ê[x]‖₂ < `epsilon`.
pub fn test_mean(data: &LabeledDataset, epsilon: f64) -> TesterVerdict {
    assert!(!data.is_empty(), "mean test on an empty dataset");
    let m = crate::core::norm(&data.mean());
    if m < epsilon {
        TesterVerdict::Accept
    } else {
        TesterVerdict::reject(
            "mean",
            m,
            format!("mean norm {m:.4} is not below {epsilon}"),
        )
    }
}

/// Exact Kolmogorov distance between the empirical law of `values` and
/// N(0,1); accepts iff it is at most `epsilon`.
///
/// The supremum of |F̂(t) − F(t)| over all t is attained next to an order
/// statistic, so both one-sided gaps are evaluated at every sorted value.
/// The input need not be pre-sorted.
pub fn ks_test(values: &[f64], epsilon: f64) -> TesterVerdict {
    assert!(!values.is_empty(), "Kolmogorov test on an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut worst = 0.0f64;
    let mut worst_at = 0.0f64;
    for (i, &x) in v.iter().enumerate() {
        // Upper-tail empirical CDF just left of x and at x.
        let tail = gaussian_tail(x);
        let left = (v.len() - i) as f64 / n - tail;
        let right = (v.len() - i - 1) as f64 / n - tail;
        for gap in [left.abs(), right.abs()] {
            if gap > worst {
                worst = gap;
                worst_at = x;
            }
        }
    }
    if worst <= epsilon {
        TesterVerdict::Accept
    } else {
        TesterVerdict::reject(
            "kolmogorov",
            worst,
            format!("Kolmogorov distance {worst:.4} at t = {worst_at:.4} exceeds {epsilon}"),
        )
    }
}

/// Accepts iff dropping the largest ⌊εn⌋ values, or the smallest ⌊εn⌋,
/// each move the mean by at most `4ε√(ln(1/ε))`.
pub fn test_trimmed_stability(values: &[f64], epsilon: f64) -> TesterVerdict {
    assert!(!values.is_empty(), "stability test on an empty sample");
    assert!(
        epsilon > 0.0 && epsilon < 0.5,
        "trim fraction must be in (0, 0.5)"
    );
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let k = (epsilon * n as f64).floor() as usize;
    let allowed = 4.0 * epsilon * (1.0 / epsilon).ln().sqrt();
    if k == 0 || k >= n {
        return TesterVerdict::Accept;
    }
    let mean: f64 = v.iter().sum::<f64>() / n as f64;
    let mean_no_top: f64 = v[..n - k].iter().sum::<f64>() / (n - k) as f64;
    let mean_no_bottom: f64 = v[k..].iter().sum::<f64>() / (n - k) as f64;
    let shift = (mean - mean_no_top).abs().max((mean - mean_no_bottom).abs());
    if shift <= allowed {
        TesterVerdict::Accept
    } else {
        TesterVerdict::reject(
            "trimmed-stability",
            shift,
            format!("trimming {k} extreme values moves the mean by {shift:.4} (allowed {allowed:.4})"),
        )
    }
}

const MONOMIAL_LIMIT: usize = 1_000_000;

/// Accepts iff every monomial moment of total degree 1..=k matches its
/// Gaussian value within `moment_tol`.
///
/// Errors (rather than rejects) if the configuration would enumerate more
/// than a million monomials; that is a misuse of the test, not evidence
/// about the sample.
pub fn test_moments(data: &LabeledDataset, k: usize, moment_tol: f64) -> Result<TesterVerdict> {
    assert!(!data.is_empty(), "moment test on an empty dataset");
    if k < 1 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k as f64,
            reason: "moment degree must be at least 1",
        });
    }
    let d = data.dim();
    let count = count_monomials(d, k).ok_or(Error::MonomialExplosion {
        count: usize::MAX,
        limit: MONOMIAL_LIMIT,
    })?;
    if count > MONOMIAL_LIMIT {
        return Err(Error::MonomialExplosion {
            count,
            limit: MONOMIAL_LIMIT,
        });
    }

    let monomials = enumerate_monomials(d, k);
    let mut sums = vec![0.0f64; monomials.len()];
    let mut powers = vec![0.0f64; d * (k + 1)];
    for (x, _) in data.iter() {
        for (j, &xj) in x.iter().enumerate() {
            let row = &mut powers[j * (k + 1)..(j + 1) * (k + 1)];
            row[0] = 1.0;
            for e in 1..=k {
                row[e] = row[e - 1] * xj;
            }
        }
        for (m, s) in monomials.iter().zip(sums.iter_mut()) {
            let mut p = 1.0;
            for &(j, e) in &m.terms {
                p *= powers[j * (k + 1) + e];
            }
            *s += p;
        }
    }

    let n = data.len() as f64;
    let mut worst_gap = 0.0f64;
    let mut worst: Option<&Monomial> = None;
    for (m, &s) in monomials.iter().zip(sums.iter()) {
        let gap = (s / n - m.gaussian_value).abs();
        if gap > worst_gap {
            worst_gap = gap;
            worst = Some(m);
        }
    }
    match worst {
        Some(m) if worst_gap > moment_tol => Ok(TesterVerdict::reject(
            "moments",
            worst_gap,
            format!(
                "monomial {} deviates from its Gaussian value by {worst_gap:.4} (allowed {moment_tol:.4})",
                m.describe()
            ),
        )),
        _ => Ok(TesterVerdict::Accept),
    }
}

struct Monomial {
    /// Sparse exponents: (coordinate, power).
    terms: Vec<(usize, usize)>,
    gaussian_value: f64,
}

impl Monomial {
    fn describe(&self) -> String {
        self.terms
            .iter()
            .map(|&(j, e)| {
                if e == 1 {
                    format!("x{j}")
                } else {
                    format!("x{j}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

fn count_monomials(d: usize, k: usize) -> Option<usize> {
    // C(d + k, k) − 1, the number of monomials of total degree 1..=k.
    let mut c: usize = 1;
    for i in 1..=k {
        c = c.checked_mul(d.checked_add(i)?)?;
        c /= i;
    }
    c.checked_sub(1)
}

fn enumerate_monomials(d: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exponents = vec![0usize; d];
    fn rec(j: usize, left: usize, d: usize, exponents: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if j == d {
            let terms: Vec<(usize, usize)> = exponents
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect();
            if terms.is_empty() {
                return;
            }
            let gaussian_value = if terms.iter().all(|&(_, e)| e % 2 == 0) {
                terms
                    .iter()
                    .map(|&(_, e)| double_factorial(e as i64 - 1))
                    .product()
            } else {
                0.0
            };
            out.push(Monomial {
                terms,
                gaussian_value,
            });
            return;
        }
        for e in 0..=left {
            exponents[j] = e;
            rec(j + 1, left - e, d, exponents, out);
        }
        exponents[j] = 0;
    }
    rec(0, k, d, &mut exponents, &mut out);
    out
}

/// Certifies the sample along direction `v`: band masses under `eta` total
/// variation against the Gaussian, and a covariance bound on the component
/// orthogonal to `v` within every well-populated band.
///
/// The projection axis is cut into bands of width `eta` out to just past
/// ±√(ln(1/η)), with two unbounded tail events; the events partition the
/// line, so every sample lands in exactly one and the reference masses sum
/// to one.
pub fn wedge_bound_test(data: &LabeledDataset, v: &[f64], eta: f64) -> TesterVerdict {
    assert!(!data.is_empty(), "wedge test on an empty dataset");
    assert!(eta > 0.0 && eta < 0.5, "eta must be in (0, 0.5)");
    let d = data.dim();
    assert_eq!(v.len(), d, "direction dimension mismatch");
    let v = crate::core::normalize(v);

    let b = ((1.0 / eta).ln().sqrt() / eta).ceil() as i64;
    let low_band = -b - 1;
    let high_band = b;
    let n_events = (2 * b + 4) as usize;
    let edge = (b + 1) as f64 * eta;

    // Pass 1: event occupancy.
    let proj = data.project(&v);
    let mut event_of = vec![0u32; proj.len()];
    let mut counts = vec![0usize; n_events];
    for (i, &u) in proj.iter().enumerate() {
        let band = (u / eta).floor() as i64;
        let e = if band < low_band {
            0
        } else if band > high_band {
            n_events - 1
        } else {
            (band - low_band + 1) as usize
        };
        event_of[i] = e as u32;
        counts[e] += 1;
    }

    // Mass check: total variation between observed and Gaussian event masses.
    let n = proj.len() as f64;
    let mut tv = 0.0;
    for (e, &c) in counts.iter().enumerate() {
        let reference = if e == 0 || e == n_events - 1 {
            gaussian_tail(edge)
        } else {
            let lo = (low_band + e as i64 - 1) as f64 * eta;
            gaussian_tail(lo) - gaussian_tail(lo + eta)
        };
        tv += (c as f64 / n - reference).abs();
    }
    if tv > eta {
        return TesterVerdict::reject(
            "wedge-mass",
            tv,
            format!("band-mass total variation {tv:.4} exceeds {eta}"),
        );
    }

    // Covariance check on the orthogonal component, per populated event.
    // The top-eigenvalue threshold of 2 only has clean-data headroom once an
    // event holds a couple hundred points; below that, sampling noise alone
    // brushes the bound. Thinner events stay subject to the mass check, and
    // their small mass caps what they could hide from this one.
    let min_count = 150.max(25 * d);
    let mut moments: Vec<Option<SymMat>> = counts
        .iter()
        .map(|&c| (c >= min_count).then(|| SymMat::zeros(d)))
        .collect();
    let mut perp = vec![0.0; d];
    for (i, (x, _)) in data.iter().enumerate() {
        if let Some(m) = &mut moments[event_of[i] as usize] {
            let u = proj[i];
            for (p, (&xj, &vj)) in perp.iter_mut().zip(x.iter().zip(&v)) {
                *p = xj - u * vj;
            }
            m.add_outer(1.0, &perp);
        }
    }
    for (e, m) in moments.iter_mut().enumerate() {
        let Some(m) = m else { continue };
        m.scale(1.0 / counts[e] as f64);
        if gershgorin_upper(m) <= 2.0 {
            continue;
        }
        let lambda = match spectral_upper(m, 1e-5) {
            Ok(l) => l,
            Err(err) => {
                return TesterVerdict::reject(
                    "wedge-covariance",
                    f64::NAN,
                    format!("spectral bound did not converge on event {e}: {err}"),
                )
            }
        };
        if lambda > 2.0 {
            return TesterVerdict::reject(
                "wedge-covariance",
                lambda,
                format!(
                    "orthogonal second moment {lambda:.3} exceeds 2 on event {e} ({} points)",
                    counts[e]
                ),
            );
        }
    }
    TesterVerdict::Accept
}

/// Event partition metadata for the wedge test, exposed for diagnostics and
/// invariant checks: (event count, reference masses).
pub fn wedge_reference_masses(eta: f64) -> Vec<f64> {
    assert!(eta > 0.0 && eta < 0.5);
    let b = ((1.0 / eta).ln().sqrt() / eta).ceil() as i64;
    let n_events = (2 * b + 4) as usize;
    let edge = (b + 1) as f64 * eta;
    (0..n_events)
        .map(|e| {
            if e == 0 || e == n_events - 1 {
                gaussian_tail(edge)
            } else {
                let lo = (-b - 1 + e as i64 - 1) as f64 * eta;
                gaussian_tail(lo) - gaussian_tail(lo + eta)
            }
        })
        .collect()
}
