use super::{nonempty, record, EstimatorKind, MeanTrace, TraceOptions};
use crate::error::Result;
use crate::frechet::lim_palfia;
use crate::space::{GeodesicSpace, Weights};

/// Streaming inductive mean `S_1 = x_1`, `S_{n+1} = S_n ⊕_{1/(n+1)} x_{n+1}`.
#[derive(Debug, Clone)]
pub struct InductiveFold<P> {
    n: usize,
    current: Option<P>,
}

impl<P: Clone> Default for InductiveFold<P> {
    fn default() -> Self {
        InductiveFold { n: 0, current: None }
    }
}

impl<P: Clone> InductiveFold<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push<S: GeodesicSpace<Point = P>>(&mut self, space: &S, x: &P) -> Result<&P> {
        self.n += 1;
        let next = match self.current.take() {
            None => {
                space.validate(x)?;
                x.clone()
            }
            Some(s) => space.interpolate(&s, x, 1.0 / self.n as f64)?,
        };
        Ok(self.current.insert(next))
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn current(&self) -> Option<&P> {
        self.current.as_ref()
    }
}

pub fn inductive_mean<S: GeodesicSpace>(space: &S, points: &[S::Point]) -> Result<MeanTrace<S::Point>> {
    inductive_mean_traced(space, points, &TraceOptions::default())
}

pub fn inductive_mean_traced<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    opts: &TraceOptions<S::Point>,
) -> Result<MeanTrace<S::Point>> {
    nonempty(points, "inductive mean")?;
    let n_max = points.len();
    let mut trace = MeanTrace::new(EstimatorKind::Inductive, None);
    let mut fold = InductiveFold::new();
    for (i, x) in points.iter().enumerate() {
        let s = fold.push(space, x)?;
        if opts.grid.contains(i + 1, n_max) {
            let s = s.clone();
            record(space, &mut trace, opts, i + 1, &s)?;
        }
    }
    Ok(trace)
}

/// Weighted barycenter approximated by the weighted Lim–Palfia scheme with
/// `lp_cycles · n` inductive steps.
pub fn weighted_mean_toeplitz<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    weights: &Weights,
    lp_cycles: usize,
) -> Result<S::Point> {
    if lp_cycles == 0 {
        return Err(crate::Error::domain("lp_cycles must be at least 1"));
    }
    Ok(lim_palfia(space, points, Some(weights), lp_cycles * points.len())?.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Euclidean, EuclideanPoint};

    fn line(v: &[f64]) -> Vec<EuclideanPoint> {
        v.iter().map(|x| EuclideanPoint(vec![*x])).collect()
    }

    #[test]
    fn arithmetic_mean_in_the_line() {
        let e = Euclidean::new(1);
        let t = inductive_mean(&e, &line(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(t.steps.len(), 4);
        assert_eq!(t.final_estimate().0[0], 2.5);
        assert_eq!(t.at(2).unwrap().estimate.0[0], 1.5);
    }

    #[test]
    fn single_and_empty() {
        let e = Euclidean::new(1);
        let t = inductive_mean(&e, &line(&[7.0])).unwrap();
        assert_eq!(t.final_estimate().0[0], 7.0);
        assert!(inductive_mean(&e, &[]).is_err());
    }

    #[test]
    fn trace_distances_and_grid() {
        let e = Euclidean::new(1);
        let pts = line(&(1..=30).map(f64::from).collect::<Vec<_>>());
        let opts = TraceOptions::new(super::super::TraceGrid::Stride(20), Some(EuclideanPoint(vec![0.0])));
        let t = inductive_mean_traced(&e, &pts, &opts).unwrap();
        let ns: Vec<usize> = t.steps.iter().map(|s| s.n).collect();
        assert_eq!(ns, [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30]);
        assert_eq!(t.last().unwrap().dist_to_reference, Some(15.5));
    }

    #[test]
    fn toeplitz_driver() {
        let e = Euclidean::new(1);
        let pts = line(&[3.0, -1.0, 8.0]);
        let first = weighted_mean_toeplitz(&e, &pts, &Weights::new(vec![1.0, 0.0, 0.0]).unwrap(), 4).unwrap();
        assert_eq!(first.0[0], 3.0);
        let w = Weights::new(vec![0.5, 0.25, 0.25]).unwrap();
        let m = weighted_mean_toeplitz(&e, &pts, &w, 200).unwrap();
        assert!((m.0[0] - 3.25).abs() < 1e-2);
        let u = weighted_mean_toeplitz(&e, &pts, &Weights::uniform(3).unwrap(), 5).unwrap();
        assert_eq!(u, lim_palfia(&e, &pts, None, 15).unwrap().estimate);
        assert!(weighted_mean_toeplitz(&e, &pts, &w, 0).is_err());
    }
}
