use crate::error::{Error, Result};

/// A halfspace classifier `x ↦ sign(v·x + t)` with unit direction `v`.
///
/// The boundary convention puts `sign(0) = +1`, so points exactly on the
/// hyperplane are labeled positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    v: Vec<f64>,
    t: f64,
}

impl Halfspace {
    /// Builds a halfspace from any nonzero direction, normalizing it.
    pub fn new(direction: &[f64], threshold: f64) -> Result<Self> {
        let n = crate::core::norm(direction);
        if !(n > 1e-12) || !n.is_finite() {
            return Err(Error::ZeroDirection { norm: n });
        }
        Ok(Self {
            v: direction.iter().map(|&c| c / n).collect(),
            t: threshold,
        })
    }

    /// Axis-aligned halfspace `sign(x_axis + t)`, handy in tests.
    pub fn axis(d: usize, axis: usize, threshold: f64) -> Self {
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        Self { v, t: threshold }
    }

    pub fn direction(&self) -> &[f64] {
        &self.v
    }

    pub fn threshold(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Labels a point: `sign(v·x + t)` with `sign(0) = +1`.
    pub fn evaluate(&self, x: &[f64]) -> i8 {
        assert_eq!(x.len(), self.v.len(), "point dimension mismatch");
        if crate::core::dot(&self.v, x) + self.t >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Signed margin `v·x + t`.
    pub fn margin(&self, x: &[f64]) -> f64 {
        crate::core::dot(&self.v, x) + self.t
    }
}

/// A single labeled example; labels are exactly ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: Vec<f64>,
    pub y: i8,
}

/// An ordered sample of labeled points in fixed dimension.
///
/// Coordinates are stored row-major in one flat buffer; at the sample sizes
/// the experiments use (10^5 to 10^6 points) this is the difference between
/// streaming through cache and chasing a million small allocations.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    d: usize,
    xs: Vec<f64>,
    ys: Vec<i8>,
}

impl LabeledDataset {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self {
            d,
            xs: Vec::new(),
            ys: Vec::new(),
        }
    }

    pub fn with_capacity(d: usize, n: usize) -> Self {
        assert!(d >= 1, "dimension must be at least 1");
        Self {
            d,
            xs: Vec::with_capacity(d * n),
            ys: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, x: &[f64], y: i8) {
        assert_eq!(x.len(), self.d, "point dimension mismatch");
        assert!(y == 1 || y == -1, "label must be +1 or -1");
        self.xs.extend_from_slice(x);
        self.ys.push(y);
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.xs[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> i8 {
        self.ys[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.ys
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], i8)> + '_ {
        self.xs.chunks_exact(self.d).zip(self.ys.iter().copied())
    }

    /// Counts of (+1, −1) labels.
    pub fn label_counts(&self) -> (usize, usize) {
        let plus = self.ys.iter().filter(|&&y| y == 1).count();
        (plus, self.ys.len() - plus)
    }

    /// Projects every point onto a direction (not necessarily unit).
    pub fn project(&self, direction: &[f64]) -> Vec<f64> {
        assert_eq!(direction.len(), self.d, "direction dimension mismatch");
        self.xs
            .chunks_exact(self.d)
            .map(|x| crate::core::dot(x, direction))
            .collect()
    }

    /// Coordinate-wise empirical mean.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.d];
        for x in self.xs.chunks_exact(self.d) {
            for (mj, &xj) in m.iter_mut().zip(x) {
                *mj += xj;
            }
        }
        let n = self.len().max(1) as f64;
        for mj in &mut m {
            *mj /= n;
        }
        m
    }

    pub(crate) fn set_label(&mut self, i: usize, y: i8) {
        assert!(y == 1 || y == -1, "label must be +1 or -1");
        self.ys[i] = y;
    }

    /// New dataset holding the points at `indices`, in the order given.
    pub fn gather(&self, indices: &[usize]) -> LabeledDataset {
        let mut out = LabeledDataset::with_capacity(self.d, indices.len());
        for &i in indices {
            out.push(self.point(i), self.label(i));
        }
        out
    }
}

/// Outcome of a distribution test: accept, or reject with one named reason.
#[derive(Debug, Clone, PartialEq)]
pub enum TesterVerdict {
    Accept,
    Reject(Diagnostic),
}

impl TesterVerdict {
    pub fn reject(check: &str, statistic: f64, message: String) -> Self {
        TesterVerdict::Reject(Diagnostic {
            check: check.to_string(),
            statistic,
            message,
        })
    }

    pub fn is_accept(&self) -> bool {
        matches!(self, TesterVerdict::Accept)
    }
}

/// Names the failed check and records the statistic that tripped it.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub check: String,
    pub statistic: f64,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.check, self.message)
    }
}

/// Fraction of points a halfspace mislabels. The dataset must be nonempty.
pub fn empirical_error(h: &Halfspace, data: &LabeledDataset) -> f64 {
    assert!(!data.is_empty(), "empirical error of an empty dataset");
    assert_eq!(h.dim(), data.dim(), "dimension mismatch");
    let wrong = data.iter().filter(|(x, y)| h.evaluate(x) != *y).count();
    wrong as f64 / data.len() as f64
}
