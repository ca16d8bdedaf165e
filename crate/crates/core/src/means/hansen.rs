use super::{nonempty, record, EstimatorKind, MeanTrace, TraceOptions};
use crate::error::Result;
use crate::exec::Execution;
use crate::space::GeodesicSpace;

/// Hansen's mean `H_n(x_1, …, x_n) = H_{n-1}(x_1 ⊕_{1/n} x_n, …, x_{n-1} ⊕_{1/n} x_n)`.
///
/// Evaluated in place: `n(n-1)/2` geodesic evaluations.
pub fn hansen<S: GeodesicSpace>(space: &S, points: &[S::Point]) -> Result<S::Point> {
    nonempty(points, "Hansen mean")?;
    let mut work = points.to_vec();
    for m in (2..=work.len()).rev() {
        let t = 1.0 / m as f64;
        let (head, tail) = work.split_at_mut(m - 1);
        let last = &tail[0];
        for y in head.iter_mut() {
            *y = space.interpolate(y, last, t)?;
        }
    }
    space.validate(&work[0])?;
    Ok(work.swap_remove(0))
}

/// `H_m` for every prefix `m`. Cubic in `n`; use [`hansen_mean_traced`] with a sparse grid for long sequences.
pub fn hansen_mean<S: GeodesicSpace>(space: &S, points: &[S::Point]) -> Result<MeanTrace<S::Point>> {
    hansen_mean_traced(space, points, &TraceOptions::default(), Execution::Sequential)
}

/// `H_m` for every prefix `m` on the trace grid. Prefixes are independent and
/// are evaluated under `execution`.
pub fn hansen_mean_traced<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    opts: &TraceOptions<S::Point>,
    execution: Execution,
) -> Result<MeanTrace<S::Point>> {
    nonempty(points, "Hansen mean")?;
    let steps = opts.grid.steps(points.len());
    let estimates = execution.map_slice(&steps, |&m| hansen(space, &points[..m]));
    let mut trace = MeanTrace::new(EstimatorKind::Hansen, None);
    for (m, h) in steps.into_iter().zip(estimates) {
        record(space, &mut trace, opts, m, &h?)?;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Euclidean, EuclideanPoint};

    fn line(v: &[f64]) -> Vec<EuclideanPoint> {
        v.iter().map(|x| EuclideanPoint(vec![*x])).collect()
    }

    #[test]
    fn base_cases() {
        let e = Euclidean::new(1);
        assert_eq!(hansen(&e, &line(&[4.0])).unwrap().0[0], 4.0);
        assert_eq!(hansen(&e, &line(&[1.0, 4.0])).unwrap().0[0], 2.5);
        assert!(hansen(&e, &[]).is_err());
    }

    #[test]
    fn euclidean_hansen_is_the_arithmetic_mean() {
        let e = Euclidean::new(1);
        let pts = line(&[0.5, -2.0, 7.0, 3.0, 1.0]);
        let t = hansen_mean(&e, &pts).unwrap();
        let mut sum = 0.0;
        for (i, step) in t.steps.iter().enumerate() {
            sum += pts[i].0[0];
            assert!((step.estimate.0[0] - sum / (i + 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn traced_prefixes_match_direct_evaluation() {
        let e = Euclidean::new(1);
        let pts = line(&(0..40).map(|i| (i as f64).sin()).collect::<Vec<_>>());
        let opts = TraceOptions::new(super::super::TraceGrid::Stride(15), None);
        let seq = hansen_mean_traced(&e, &pts, &opts, Execution::Sequential).unwrap();
        let par = hansen_mean_traced(&e, &pts, &opts, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.at(30).unwrap().estimate, hansen(&e, &pts[..30]).unwrap());
    }
}
