//! Geometric property checks: metric axioms, the NPC comparison inequality and
//! the variance inequality.
//!
//! Violations are reported relative to the magnitudes involved, so one
//! tolerance works across spaces with very different scales.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{GeodesicSpace, Weights};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::seed::{self, Domain};

/// `(1-t) d(z,x)² + t d(z,y)² - t(1-t) d(x,y)² - d(z, x ⊕_t y)²`.
///
/// Non-negative in every CAT(0) space, zero in flat space.
pub fn npc_gap<S: GeodesicSpace>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    z: &S::Point,
    t: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("npc_gap: t = {t} outside [0, 1]")));
    }
    let g = space.interpolate(x, y, t)?;
    let dzx = space.distance(z, x)?;
    let dzy = space.distance(z, y)?;
    let dxy = space.distance(x, y)?;
    let dzg = space.distance(z, &g)?;
    Ok((1.0 - t) * dzx * dzx + t * dzy * dzy - t * (1.0 - t) * dxy * dxy - dzg * dzg)
}

/// `½ d(z,x)² + ½ d(z,y)² - ¼ d(x,y)² - d(z,m)²` for the geodesic midpoint `m`.
pub fn midpoint_gap<S: GeodesicSpace>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    z: &S::Point,
) -> Result<f64> {
    let m = space.midpoint(x, y)?;
    let dzx = space.distance(z, x)?;
    let dzy = space.distance(z, y)?;
    let dxy = space.distance(x, y)?;
    let dzm = space.distance(z, &m)?;
    Ok(0.5 * dzx * dzx + 0.5 * dzy * dzy - 0.25 * dxy * dxy - dzm * dzm)
}

/// `Σ w_k d(x_k,z)² - Σ w_k d(x_k,m)² - d(m,z)²`.
///
/// Non-negative when `m` is the weighted barycenter of the points.
pub fn variance_gap<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    weights: &Weights,
    candidate: &S::Point,
    z: &S::Point,
) -> Result<f64> {
    weights.check_len(points.len())?;
    let mut gap = 0.0;
    for (p, w) in points.iter().zip(weights.as_slice()) {
        let dz = space.distance(p, z)?;
        let dm = space.distance(p, candidate)?;
        gap += w * (dz * dz - dm * dm);
    }
    let dmz = space.distance(candidate, z)?;
    Ok(gap - dmz * dmz)
}

/// Produces random valid points of a space.
pub trait PointSampler<P>: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<P>;
}

impl<P, F> PointSampler<P> for F
where
    F: Fn(&mut ChaCha8Rng) -> Result<P> + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<P> {
        self(rng)
    }
}

/// Parameters of a randomized axiom sweep.
#[derive(Debug, Clone, Copy)]
pub struct AxiomCheck {
    pub n_cases: usize,
    pub tol: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl AxiomCheck {
    pub fn new(n_cases: usize, tol: f64) -> Self {
        AxiomCheck {
            n_cases,
            tol,
            seed: 0,
            execution: Execution::default(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Largest relative violation seen for each property.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxiomReport {
    pub cases: usize,
    pub tol: f64,
    pub symmetry: f64,
    pub identity: f64,
    pub triangle: f64,
    pub endpoint: f64,
    pub speed: f64,
    pub npc: f64,
    pub midpoint: f64,
}

impl AxiomReport {
    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("symmetry", self.symmetry),
            ("identity", self.identity),
            ("triangle", self.triangle),
            ("geodesic-endpoint", self.endpoint),
            ("geodesic-speed", self.speed),
            ("npc", self.npc),
            ("midpoint", self.midpoint),
        ]
    }

    pub fn worst(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.entries().iter().all(|(_, v)| *v <= self.tol)
    }

    fn merge(mut self, other: &AxiomReport) -> Self {
        self.symmetry = self.symmetry.max(other.symmetry);
        self.identity = self.identity.max(other.identity);
        self.triangle = self.triangle.max(other.triangle);
        self.endpoint = self.endpoint.max(other.endpoint);
        self.speed = self.speed.max(other.speed);
        self.npc = self.npc.max(other.npc);
        self.midpoint = self.midpoint.max(other.midpoint);
        self
    }
}

fn one_case<S: GeodesicSpace>(
    space: &S,
    sampler: &impl PointSampler<S::Point>,
    rng: &mut ChaCha8Rng,
) -> Result<AxiomReport> {
    let x = sampler.sample(rng)?;
    let y = sampler.sample(rng)?;
    let z = sampler.sample(rng)?;
    let (s, t): (f64, f64) = (rng.random(), rng.random());

    let dxy = space.distance(&x, &y)?;
    let dyx = space.distance(&y, &x)?;
    let dyz = space.distance(&y, &z)?;
    let dxz = space.distance(&x, &z)?;
    let dzx = space.distance(&z, &x)?;

    let g0 = space.interpolate(&x, &y, 0.0)?;
    let g1 = space.interpolate(&x, &y, 1.0)?;
    let gs = space.interpolate(&x, &y, s)?;
    let gt = space.interpolate(&x, &y, t)?;
    let speed = (space.distance(&gs, &gt)? - (t - s).abs() * dxy).abs();

    let npc_scale = 1.0 + dxy * dxy + dzx * dzx;
    let npc = npc_gap(space, &x, &y, &z, t)?;
    let mid = midpoint_gap(space, &x, &y, &z)?;

    Ok(AxiomReport {
        cases: 1,
        tol: 0.0,
        symmetry: (dxy - dyx).abs() / (1.0 + dxy),
        identity: space.distance(&x, &x)?.max(space.distance(&y, &y)?),
        triangle: (dxz - dxy - dyz).max(0.0) / (1.0 + dxy + dyz),
        endpoint: space.distance(&g0, &x)?.max(space.distance(&g1, &y)?) / (1.0 + dxy),
        speed: speed / (1.0 + dxy),
        npc: (-npc).max(0.0) / npc_scale,
        midpoint: (-mid).max(0.0) / npc_scale,
    })
}

/// Samples `n_cases` random triples and reports the worst violation of each axiom.
///
/// Case `i` draws from its own random stream, so the report does not depend on
/// the execution mode.
pub fn check_metric_axioms<S: GeodesicSpace>(
    space: &S,
    sampler: &impl PointSampler<S::Point>,
    check: AxiomCheck,
) -> Result<AxiomReport> {
    if check.n_cases == 0 {
        return Err(Error::domain("axiom check needs at least one case"));
    }
    let cases = check.execution.map_range(check.n_cases, |i| {
        let mut rng = seed::stream(check.seed, Domain::Sampler, i as u64);
        one_case(space, sampler, &mut rng)
    });
    let mut report = AxiomReport {
        cases: check.n_cases,
        tol: check.tol,
        ..AxiomReport::default()
    };
    for case in cases {
        report = report.merge(&case?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Euclidean, EuclideanPoint};

    fn p(v: f64) -> EuclideanPoint {
        EuclideanPoint(vec![v])
    }

    #[test]
    fn npc_gap_is_zero_in_the_flat_line() {
        let e = Euclidean::new(1);
        let gap = npc_gap(&e, &p(0.0), &p(2.0), &p(1.0), 0.5).unwrap();
        assert_eq!(gap, 0.0);
        assert_eq!(npc_gap(&e, &p(0.3), &p(2.0), &p(0.3), 0.0).unwrap(), 0.0);
        assert!(npc_gap(&e, &p(0.0), &p(1.0), &p(2.0), 1.1).is_err());
    }

    #[test]
    fn variance_gap_vanishes_at_the_arithmetic_mean() {
        let e = Euclidean::new(1);
        let pts = vec![p(1.0), p(2.0), p(6.0)];
        let w = Weights::uniform(3).unwrap();
        let gap = variance_gap(&e, &pts, &w, &p(3.0), &p(-4.5)).unwrap();
        assert!(gap.abs() < 1e-12);
        let single = variance_gap(&e, &[p(2.0)], &Weights::uniform(1).unwrap(), &p(2.0), &p(9.0));
        assert!(single.unwrap().abs() < 1e-12);
        assert!(variance_gap(&e, &pts, &Weights::uniform(2).unwrap(), &p(3.0), &p(0.0)).is_err());
    }

    #[test]
    fn euclidean_axioms_hold_to_machine_precision() {
        let e = Euclidean::new(3);
        let sampler = |rng: &mut ChaCha8Rng| Ok(e.random_point(rng, 2.0));
        let report = check_metric_axioms(&e, &sampler, AxiomCheck::new(300, 1e-12)).unwrap();
        assert!(report.passes(), "{report:?}");
    }

    #[test]
    fn zero_cases_rejected() {
        let e = Euclidean::new(1);
        let sampler = |rng: &mut ChaCha8Rng| Ok(e.random_point(rng, 1.0));
        assert!(check_metric_axioms(&e, &sampler, AxiomCheck::new(0, 1e-8)).is_err());
    }
}
