//! Barycenter approximation by the Lim–Palfia cyclic inductive scheme, and
//! exact barycenters where a closed form exists.

use crate::book::{BookPoint, OpenBook};
use crate::error::{Error, Result};
use crate::space::{Euclidean, EuclideanPoint, GeodesicSpace, Weights};
use crate::spd::{commuting_weighted_barycenter, SpdMatrix, SpdSpace};

/// How the diameter entering the certificate is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiameterMode {
    /// Pairwise maximum, `O(n²)` distances.
    #[default]
    Exact,
    /// `2 max_i d(x_1, x_i)`: an upper bound on the diameter in `O(n)`.
    DoubledRadius,
}

/// Output of [`lim_palfia`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpResult<P> {
    pub estimate: P,
    pub n_points: usize,
    /// Total number of inductive steps `k`.
    pub total_steps: usize,
    pub diameter: f64,
}

impl<P> LpResult<P> {
    /// `2 Δ √(n / k)`, an upper bound on the distance from the estimate to the barycenter.
    pub fn certificate(&self) -> f64 {
        2.0 * self.diameter * (self.n_points as f64 / self.total_steps as f64).sqrt()
    }
}

pub fn diameter<S: GeodesicSpace>(space: &S, points: &[S::Point], mode: DiameterMode) -> Result<f64> {
    let mut d: f64 = 0.0;
    match mode {
        DiameterMode::Exact => {
            for (i, a) in points.iter().enumerate() {
                for b in &points[i + 1..] {
                    d = d.max(space.distance(a, b)?);
                }
            }
        }
        DiameterMode::DoubledRadius => {
            if let Some(first) = points.first() {
                for b in &points[1..] {
                    d = d.max(space.distance(first, b)?);
                }
            }
            d *= 2.0;
        }
    }
    Ok(d)
}

/// Deterministic weighted cycling: each step credits every point with its
/// weight and emits the point holding the largest credit (lowest index on
/// ties), which is then debited by one. After `m` steps each point has been
/// used `w_i m` times up to rounding.
struct WeightedSchedule<'a> {
    weights: &'a [f64],
    credit: Vec<f64>,
}

impl<'a> WeightedSchedule<'a> {
    fn new(weights: &'a [f64]) -> Self {
        WeightedSchedule {
            weights,
            credit: vec![0.0; weights.len()],
        }
    }

    fn next_index(&mut self) -> usize {
        for (c, w) in self.credit.iter_mut().zip(self.weights) {
            *c += w;
        }
        let mut best = 0;
        for i in 1..self.credit.len() {
            if self.credit[i] > self.credit[best] {
                best = i;
            }
        }
        self.credit[best] -= 1.0;
        best
    }
}

/// Inductive mean of `x_1, …, x_n, x_1, …, x_n, …` truncated after `total_steps` terms.
///
/// With weights, points are cycled with frequencies proportional to their
/// weights; uniform weights take the plain cyclic path.
pub fn lim_palfia<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    weights: Option<&Weights>,
    total_steps: usize,
) -> Result<LpResult<S::Point>> {
    lim_palfia_with(space, points, weights, total_steps, DiameterMode::Exact)
}

pub fn lim_palfia_with<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    weights: Option<&Weights>,
    total_steps: usize,
    mode: DiameterMode,
) -> Result<LpResult<S::Point>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::domain("Lim–Palfia scheme on no points"));
    }
    if total_steps < n {
        return Err(Error::Domain(format!(
            "step budget {total_steps} is smaller than the number of points {n}"
        )));
    }
    if let Some(w) = weights {
        w.check_len(n)?;
    }
    let weighted = weights.filter(|w| !w.is_uniform());
    let mut schedule = weighted.map(|w| WeightedSchedule::new(w.as_slice()));
    let mut pick = |m: usize| match schedule.as_mut() {
        Some(s) => s.next_index(),
        None => m % n,
    };

    let first = pick(0);
    space.validate(&points[first])?;
    let mut estimate = points[first].clone();
    for m in 1..total_steps {
        let y = &points[pick(m)];
        estimate = space.interpolate(&estimate, y, 1.0 / (m + 1) as f64)?;
    }
    Ok(LpResult {
        estimate,
        n_points: n,
        total_steps,
        diameter: diameter(space, points, mode)?,
    })
}

/// Spaces with an exact weighted barycenter.
pub trait FrechetOracle: GeodesicSpace {
    fn frechet_oracle(&self, points: &[Self::Point], weights: &Weights) -> Result<Self::Point>;
}

impl FrechetOracle for Euclidean {
    fn frechet_oracle(&self, points: &[EuclideanPoint], weights: &Weights) -> Result<EuclideanPoint> {
        if points.is_empty() {
            return Err(Error::domain("barycenter of no points"));
        }
        weights.check_len(points.len())?;
        let mut acc = vec![0.0; self.dim];
        for (p, w) in points.iter().zip(weights.as_slice()) {
            self.validate(p)?;
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += w * c;
            }
        }
        Ok(EuclideanPoint(acc))
    }
}

/// Only commuting families have a closed form; others are rejected.
impl FrechetOracle for SpdSpace {
    fn frechet_oracle(&self, points: &[SpdMatrix], weights: &Weights) -> Result<SpdMatrix> {
        for p in points {
            self.validate(p)?;
        }
        commuting_weighted_barycenter(points, weights)
    }
}

impl FrechetOracle for OpenBook {
    fn frechet_oracle(&self, points: &[BookPoint], weights: &Weights) -> Result<BookPoint> {
        self.frechet_mean(points, weights)
    }
}
