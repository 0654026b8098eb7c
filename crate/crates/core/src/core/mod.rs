//! Shared geometry: halfspaces, labeled samples, Gaussian tail helpers, and
//! the small amount of deterministic linear algebra the testers need.

mod config;
mod gauss;
mod linalg;
mod types;

pub use config::{LearnConfig, SampleCaps};
pub use gauss::{gaussian_pdf, gaussian_tail, gaussian_tail_inv};
pub use linalg::{dot, gershgorin_upper, norm, normalize, scale_add, spectral_upper, SymMat};
pub use types::{
    empirical_error, Diagnostic, Halfspace, LabeledDataset, LabeledPoint, TesterVerdict,
};
