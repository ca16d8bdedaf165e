use rand::Rng;

use super::{nonempty, record, EstimatorKind, InductiveFold, MeanTrace, TraceOptions};
use crate::error::Result;
use crate::seed::{self, Domain};
use crate::space::GeodesicSpace;

/// Zero-based index of `Y_n`, uniform over the first `n` points.
///
/// Keyed on `(seed, n)` alone, so any step of a trace can be replayed in isolation.
pub fn resample_index(seed: u64, n: usize) -> usize {
    debug_assert!(n >= 1);
    seed::stream(seed, Domain::Resample, n as u64).random_range(0..n)
}

/// Stochastic resampling estimator: `M_1 = Y_1`, `M_n = M_{n-1} ⊕_{1/n} Y_n`
/// with `Y_n` drawn uniformly from `x_1, …, x_n` (the newest point included).
pub fn resampled_mean<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    seed: u64,
) -> Result<MeanTrace<S::Point>> {
    resampled_mean_traced(space, points, seed, &TraceOptions::default())
}

pub fn resampled_mean_traced<S: GeodesicSpace>(
    space: &S,
    points: &[S::Point],
    seed: u64,
    opts: &TraceOptions<S::Point>,
) -> Result<MeanTrace<S::Point>> {
    nonempty(points, "resampled mean")?;
    let n_max = points.len();
    let mut trace = MeanTrace::new(EstimatorKind::Resampled, Some(seed));
    let mut fold = InductiveFold::new();
    for n in 1..=n_max {
        let y = &points[resample_index(seed, n)];
        let m = fold.push(space, y)?;
        if opts.grid.contains(n, n_max) {
            let m = m.clone();
            record(space, &mut trace, opts, n, &m)?;
        }
    }
    Ok(trace)
}
