use crate::error::{Error, Result};

/// Parameters for one learning run.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    /// Target excess error, in (0, 1/2).
    pub epsilon: f64,
    /// Failure probability for the boosted learner, in (0, 1/2).
    pub tau: f64,
    /// Master seed; every random choice derives from it.
    pub seed: u64,
    /// Per-stage sample-size ceilings.
    pub caps: SampleCaps,
}

/// Ceilings on how many points each internal stage consumes.
///
/// The candidate loop touches the sample once per grid center, so the full
/// dataset is reserved for the stages whose accuracy actually needs it
/// (center finding, final selection) while the per-candidate work runs on
/// deterministic subsamples. Defaults are sized so every certification test
/// keeps comfortably more resolution than the tolerances it enforces.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCaps {
    /// Most points one candidate's rejection filter may scan.
    pub localization: usize,
    /// Survivor count the filter scan aims for; the scan length per
    /// candidate is chosen from the closed-form acceptance rate to land
    /// near this, so shallow centers do not drown the loop in survivors
    /// that certification then ignores.
    pub target_survivors: usize,
    /// Points for per-round band-mass and covariance certification. Kept
    /// large enough that the thinnest certified band (about 1% of mass)
    /// holds a few hundred points; covariance estimates on fewer points
    /// brush the acceptance bound on genuinely Gaussian data.
    pub certification: usize,
    /// Points for per-candidate moment certification.
    pub moment_check: usize,
    /// Points for the full-sample wedge gate.
    pub wedge: usize,
    /// Points for hypothesis selection.
    pub selection: usize,
}

impl Default for SampleCaps {
    fn default() -> Self {
        Self {
            localization: 450_000,
            target_survivors: 30_000,
            certification: 25_000,
            moment_check: 4_000,
            wedge: 50_000,
            selection: 80_000,
        }
    }
}

impl LearnConfig {
    pub fn new(epsilon: f64, tau: f64, seed: u64) -> Result<Self> {
        let c = Self {
            epsilon,
            tau,
            seed,
            caps: SampleCaps::default(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: self.epsilon,
                reason: "must be in (0, 0.5)",
            });
        }
        if !(self.tau > 0.0 && self.tau < 0.5) {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: self.tau,
                reason: "must be in (0, 0.5)",
            });
        }
        if self.caps.localization < 1000
            || self.caps.target_survivors < 500
            || self.caps.certification < 500
            || self.caps.moment_check < 500
            || self.caps.wedge < 1000
            || self.caps.selection < 1000
        {
            return Err(Error::InvalidParameter {
                name: "caps",
                value: 0.0,
                reason: "sample caps are too small to certify anything",
            });
        }
        Ok(())
    }
}
