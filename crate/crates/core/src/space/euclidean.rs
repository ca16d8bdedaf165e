use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_fraction, GeodesicSpace};
use crate::error::{Error, Result};

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanPoint(pub Vec<f64>);

impl EuclideanPoint {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for EuclideanPoint {
    fn from(v: Vec<f64>) -> Self {
        EuclideanPoint(v)
    }
}

/// Flat space `R^d`: the reference instance where all reasonable means coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    pub dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        Euclidean { dim }
    }

    /// Standard normal coordinates scaled by `scale`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> EuclideanPoint {
        EuclideanPoint(
            (0..self.dim)
                .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
                .collect(),
        )
    }

    pub fn arithmetic_mean(&self, points: &[EuclideanPoint]) -> Result<EuclideanPoint> {
        if points.is_empty() {
            return Err(Error::domain("mean of no points"));
        }
        let mut acc = vec![0.0; self.dim];
        for p in points {
            self.validate(p)?;
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += c;
            }
        }
        let n = points.len() as f64;
        Ok(EuclideanPoint(acc.into_iter().map(|a| a / n).collect()))
    }
}

impl GeodesicSpace for Euclidean {
    type Point = EuclideanPoint;

    fn distance(&self, x: &EuclideanPoint, y: &EuclideanPoint) -> Result<f64> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(x.0
            .iter()
            .zip(&y.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    fn interpolate(&self, x: &EuclideanPoint, y: &EuclideanPoint, t: f64) -> Result<EuclideanPoint> {
        check_fraction(t)?;
        self.validate(x)?;
        self.validate(y)?;
        Ok(EuclideanPoint(
            x.0.iter().zip(&y.0).map(|(a, b)| a + t * (b - a)).collect(),
        ))
    }

    fn validate(&self, p: &EuclideanPoint) -> Result<()> {
        if p.0.len() != self.dim {
            return Err(Error::Domain(format!(
                "point of dimension {} in R^{}",
                p.0.len(),
                self.dim
            )));
        }
        Ok(())
    }
}
