//! The geodesic-space contract shared by every construction in the crate.

mod checks;
mod euclidean;

pub use checks::{
    check_metric_axioms, midpoint_gap, npc_gap, variance_gap, AxiomCheck, AxiomReport,
    PointSampler,
};
pub use euclidean::{Euclidean, EuclideanPoint};

use std::fmt::Debug;

use crate::error::{Error, Result};

/// Two points closer than this are treated as equal.
pub const TOL_POINT: f64 = 1e-10;

/// A uniquely geodesic metric space.
///
/// Implementations must satisfy the metric axioms, return the endpoints of the
/// geodesic at `t = 0` and `t = 1`, and parameterize geodesics proportionally to
/// arc length: `d(γ(s), γ(t)) = |t - s| d(x, y)`.
pub trait GeodesicSpace: Sync {
    type Point: Clone + Debug + PartialEq + Send + Sync;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<f64>;

    /// The point `x ⊕_t y` at fraction `t ∈ [0, 1]` along the geodesic from `x` to `y`.
    fn interpolate(&self, x: &Self::Point, y: &Self::Point, t: f64) -> Result<Self::Point>;

    /// Rejects points that do not belong to this space instance.
    fn validate(&self, _p: &Self::Point) -> Result<()> {
        Ok(())
    }

    fn same_point(&self, x: &Self::Point, y: &Self::Point) -> Result<bool> {
        Ok(self.distance(x, y)? <= TOL_POINT)
    }

    fn midpoint(&self, x: &Self::Point, y: &Self::Point) -> Result<Self::Point> {
        self.interpolate(x, y, 0.5)
    }
}

pub(crate) fn check_fraction(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("geodesic fraction {t} outside [0, 1]")))
    }
}

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    const SUM_TOL: f64 = 1e-9;

    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::domain("empty weight vector"));
        }
        if let Some(bad) = w.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!("invalid weight {bad}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::Domain(format!("weights sum to {sum}, not 1")));
        }
        Ok(Weights(w))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("uniform weights over zero points"));
        }
        Ok(Weights(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_uniform(&self) -> bool {
        self.0.iter().all(|w| *w == self.0[0])
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{} weights for {n} points",
                self.len()
            )))
        }
    }
}
