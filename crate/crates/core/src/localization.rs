//! Rejection sampling that reshapes the Gaussian around a candidate center,
//! plus the closed-form transforms between the original and localized frames.
//!
//! A parameter set `(dir, shift, σ)` filters points with probability
//! `exp(−(σ⁻² − 1)(dir·x − c)²/2)` where `c = shift/(1 − σ²)`. Against a
//! standard Gaussian the survivors are distributed as N(w, Σ) with
//! `w = shift·dir` and `Σ = I − (1 − σ²)·dir·dirᵀ`: a Gaussian centered at
//! the candidate, squeezed to width σ along it, untouched orthogonally.
//! `Σ^{±1/2}` are rank-one updates, so every transform here is O(d) per
//! point and no matrix is ever materialized.
//!
//! The acceptance exponent is built so the peak sits at `dir·x = c`; the
//! closed-form survivor fraction `σ·exp(−shift²/(2(1 − σ²)))` and the
//! survivor law are both pinned by tests.

use crate::core::{dot, norm, normalize, Halfspace, LabeledDataset};
use crate::error::{Error, Result};
use crate::seeding::point_uniform;

/// Acceptance probabilities below `exp(−40)` are treated as zero, in the
/// generic and the specialized filter alike, so the two paths make
/// identical decisions point for point.
pub const MIN_ACCEPT_EXPONENT: f64 = 40.0;

/// Localization filter parameters: unit direction, center offset along it,
/// and the target width σ of the survivors' marginal on the direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionParams {
    dir: Vec<f64>,
    shift: f64,
    sigma: f64,
}

/// `min(1/‖w‖₂, √(1/2))`: the filter width used for a candidate center.
pub fn sigma_for(w: &[f64]) -> Result<f64> {
    let n = norm(w);
    if n <= 1e-12 {
        return Err(Error::ZeroDirection { norm: n });
    }
    Ok((1.0 / n).min(0.5f64.sqrt()))
}

impl RejectionParams {
    /// Filter centered on `w`, i.e. survivors ≈ N(w, Σ).
    pub fn centered(w: &[f64], sigma: f64) -> Result<Self> {
        let shift = norm(w);
        if shift <= 1e-12 {
            return Err(Error::ZeroDirection { norm: shift });
        }
        Self::build(normalize(w), shift, sigma)
    }

    /// Filter centered on `w` with the standard width `sigma_for(w)`.
    pub fn for_center(w: &[f64]) -> Result<Self> {
        Self::centered(w, sigma_for(w)?)
    }

    /// Zero-shift filter: squeezes the marginal along `dir` to width σ
    /// without moving the center. Survivor fraction is exactly σ.
    pub fn band(dir: &[f64], sigma: f64) -> Result<Self> {
        let n = norm(dir);
        if n <= 1e-12 {
            return Err(Error::ZeroDirection { norm: n });
        }
        Self::build(normalize(dir), 0.0, sigma)
    }

    fn build(dir: Vec<f64>, shift: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "filter width must be in (0, 1)",
            });
        }
        Ok(Self { dir, shift, sigma })
    }

    pub fn dir(&self) -> &[f64] {
        &self.dir
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    /// The center vector `shift·dir`.
    pub fn center(&self) -> Vec<f64> {
        self.dir.iter().map(|&v| self.shift * v).collect()
    }

    /// Where the acceptance probability peaks on the projection axis.
    fn peak(&self) -> f64 {
        self.shift / (1.0 - self.sigma * self.sigma)
    }

    /// Negative log of the acceptance probability at projection `proj`.
    pub fn exponent_at(&self, proj: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let gap = proj - self.peak();
        (1.0 / s2 - 1.0) * gap * gap / 2.0
    }

    /// Probability of keeping a point whose projection on `dir` is `proj`.
    pub fn accept_probability_at(&self, proj: f64) -> f64 {
        (-self.exponent_at(proj)).exp()
    }

    pub fn accept_probability(&self, x: &[f64]) -> f64 {
        self.accept_probability_at(dot(&self.dir, x))
    }

    /// The exact keep/drop decision for projection `proj` against a uniform
    /// draw `u`; shared by every filtering path.
    pub fn accepts(&self, proj: f64, u: f64) -> bool {
        let q = self.exponent_at(proj);
        q < MIN_ACCEPT_EXPONENT && u < (-q).exp()
    }

    /// Expected survivor fraction over N(0, I): `σ·exp(−shift²/(2(1−σ²)))`.
    pub fn acceptance_rate(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        self.sigma * (-self.shift * self.shift / (2.0 * (1.0 - s2))).exp()
    }

    /// `Σ^{−1/2}(x − w)`: survivor frame → standard frame.
    pub fn to_isotropic(&self, x: &[f64]) -> Vec<f64> {
        let p = dot(&self.dir, x) - self.shift;
        let stretch = (1.0 / self.sigma - 1.0) * p;
        x.iter()
            .zip(&self.dir)
            .map(|(&xi, &di)| xi - self.shift * di + stretch * di)
            .collect()
    }

    /// `w + Σ^{1/2}z`: inverse of [`Self::to_isotropic`].
    pub fn from_isotropic(&self, z: &[f64]) -> Vec<f64> {
        let p = dot(&self.dir, z);
        let squeeze = (self.sigma - 1.0) * p;
        z.iter()
            .zip(&self.dir)
            .map(|(&zi, &di)| zi + self.shift * di + squeeze * di)
            .collect()
    }

    /// Applies [`Self::to_isotropic`] to every point, labels untouched.
    pub fn isotropize(&self, data: &LabeledDataset) -> LabeledDataset {
        assert_eq!(data.dim(), self.dim(), "dimension mismatch");
        let mut out = LabeledDataset::with_capacity(data.dim(), data.len());
        for (x, y) in data.iter() {
            out.push(&self.to_isotropic(x), y);
        }
        out
    }

    /// The halfspace that labels the isotropized survivors exactly as `h`
    /// labels the originals: direction `Σ^{1/2}v` normalized, threshold
    /// `(v·w + t)/‖Σ^{1/2}v‖`.
    pub fn transformed_halfspace(&self, h: &Halfspace) -> Result<Halfspace> {
        assert_eq!(h.dim(), self.dim(), "dimension mismatch");
        let v = h.direction();
        let p = dot(&self.dir, v);
        let squeeze = (self.sigma - 1.0) * p;
        let vt: Vec<f64> = v
            .iter()
            .zip(&self.dir)
            .map(|(&vi, &di)| vi + squeeze * di)
            .collect();
        let scale = norm(&vt);
        if scale < 1e-12 {
            return Err(Error::ZeroDirection { norm: scale });
        }
        let t = (self.shift * p + h.threshold()) / scale;
        Halfspace::new(&vt, t)
    }

    /// Maps a unit direction learned in the isotropic frame back to the
    /// original frame: `Σ^{−1/2}v` normalized. Inverts the direction part
    /// of [`Self::transformed_halfspace`] exactly.
    pub fn revert_direction(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let stretch = (1.0 / self.sigma - 1.0) * dot(&self.dir, v);
        let out: Vec<f64> = v
            .iter()
            .zip(&self.dir)
            .map(|(&vi, &di)| vi + stretch * di)
            .collect();
        normalize(&out)
    }
}

/// A filtered dataset together with the realized survivor fraction.
#[derive(Debug, Clone)]
pub struct Filtered {
    pub data: LabeledDataset,
    pub accepted_fraction: f64,
}

/// Keeps each point of `data` independently with its acceptance
/// probability, deterministically in `seed`. Point `i`'s uniform draw
/// depends only on `(seed, i)`, never on other points.
pub fn reject_filter(data: &LabeledDataset, p: &RejectionParams, seed: u64) -> Filtered {
    assert_eq!(data.dim(), p.dim(), "dimension mismatch");
    let proj = data.project(p.dir());
    let mut kept = Vec::new();
    for (i, &u_proj) in proj.iter().enumerate() {
        if p.accepts(u_proj, point_uniform(seed, i as u64)) {
            kept.push(i);
        }
    }
    Filtered {
        accepted_fraction: kept.len() as f64 / data.len().max(1) as f64,
        data: data.gather(&kept),
    }
}

/// Generic variant of [`reject_filter`] keeping each point with probability
/// `prob(x)`, under the same per-point uniforms and the same small-probability
/// cutoff. Exists so self-checks can swap in a deliberately wrong probability
/// and watch the survivor law break.
pub fn filter_with<F>(data: &LabeledDataset, seed: u64, prob: F) -> Filtered
where
    F: Fn(&[f64]) -> f64,
{
    let floor = (-MIN_ACCEPT_EXPONENT).exp();
    let mut kept = Vec::new();
    for i in 0..data.len() {
        let p = prob(data.point(i));
        if p > floor && point_uniform(seed, i as u64) < p {
            kept.push(i);
        }
    }
    Filtered {
        accepted_fraction: kept.len() as f64 / data.len().max(1) as f64,
        data: data.gather(&kept),
    }
}

/// Inputs to the direction-reversion guarantee: the inner learner came back
/// with a direction `delta`-close to the transformed target, the center was
/// `beta`-close to the true direction, and the filter width was `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReversionBound {
    pub delta: f64,
    pub beta: f64,
    pub sigma: f64,
}

const REVERSION_CONSTANT: f64 = 8.0;

/// Upper bound on ‖reverted direction − true direction‖₂:
/// `8·δ·(σ + β)·(σ⁻¹·β/(1 − β²/2) + 1)`.
pub fn reversion_error_bound(b: &ReversionBound) -> Result<f64> {
    if !(b.sigma > 0.0 && b.sigma < 1.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: b.sigma,
            reason: "width must be in (0, 1)",
        });
    }
    if !(b.delta >= 0.0 && b.delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: b.delta,
            reason: "direction error must be in [0, 1)",
        });
    }
    if !(b.beta >= 0.0 && b.beta * b.beta < 2.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: b.beta,
            reason: "center distance must be in [0, √2)",
        });
    }
    let amplification = b.beta / (b.sigma * (1.0 - b.beta * b.beta / 2.0)) + 1.0;
    Ok(REVERSION_CONSTANT * b.delta * (b.sigma + b.beta) * amplification)
}
