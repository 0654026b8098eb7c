//! Learning halfspaces you can trust on data you cannot.
//!
//! This crate implements a tester-learner for general (non-homogeneous)
//! halfspaces: given labeled samples that are supposed to come from a
//! standard Gaussian marginal with adversarially corrupted labels, it either
//! rejects the sample as un-Gaussian or accepts and returns a hypothesis
//! whose error is competitive with the best halfspace. Acceptance is earned,
//! not assumed: every distributional property the analysis leans on is
//! checked on the sample itself, so an adversary cannot smuggle in a marginal
//! that silently breaks the guarantee.
//!
//! The pipeline, bottom to top:
//!
//! * [`core`](mod@core): halfspaces, labeled datasets, Gaussian tails, and a
//!   deterministic spectral bound.
//! * [`synth`]: synthetic data: Gaussian and foil marginals, plus label
//!   adversaries with an exact corruption budget.
//! * [`testers`]: moment, Kolmogorov, trimmed-mean, and wedge tests that
//!   certify the sample before any estimate is trusted.
//! * [`localization`]: rejection sampling that zooms into a band around a
//!   candidate separating hyperplane and re-isotropizes the survivors.
//! * [`center_finder`]: builds the list of candidate localization centers
//!   from label-conditional tail means and the correlation vector E[yx].
//! * [`learner`]: the near-homogeneous inner loop, hypothesis construction,
//!   the full tester-learner, and its confidence-boosted wrapper.
//!
//! All randomness flows from one 64-bit seed (see [`seeding`]); runs are
//! bit-reproducible for a fixed seed and configuration.

pub mod core;
pub mod error;
pub mod seeding;

pub mod center_finder;
pub mod learner;
pub mod localization;
pub mod synth;
pub mod testers;

pub use crate::core::{
    empirical_error, gaussian_pdf, gaussian_tail, gaussian_tail_inv, spectral_upper, Diagnostic,
    Halfspace, LabeledDataset, LabeledPoint, LearnConfig, SampleCaps, TesterVerdict,
};
pub use error::{Error, Result};
