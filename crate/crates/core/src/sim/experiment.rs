use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use super::config::{ExperimentConfig, ExperimentKind};
use super::contamination::{huber_contaminate, ContaminationSpec, FixedPoint, NoiseModel, RandomSheet};
use crate::book::{BookPoint, OpenBook};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::frechet::lim_palfia;
use crate::means::{
    es_sahib_mean, hansen_mean_traced, inductive_mean_traced, resampled_mean_traced, EsSahibConfig,
    EstimatorKind, MeanTrace, TraceGrid, TraceOptions, TraceStep,
};
use crate::seed::{self, Domain};
use crate::space::GeodesicSpace;
use crate::spd::{spectral_distance, SpdMatrix, SpdSpace};

/// `A_n = diag(1/10 + 1/n, 10 + 1/n)`.
pub fn spd_sequence(n: usize) -> SpdMatrix {
    assert!(n >= 1, "sequence is indexed from 1");
    let n = n as f64;
    SpdMatrix::from_diagonal(&[0.1 + 1.0 / n, 10.0 + 1.0 / n]).expect("positive diagonal")
}

/// `A = diag(1/10, 10)`, the limit of [`spd_sequence`].
pub fn spd_limit() -> SpdMatrix {
    SpdMatrix::from_diagonal(&[0.1, 10.0]).expect("positive diagonal")
}

/// The contaminating matrix `B = 5I`.
pub fn spd_noise() -> SpdMatrix {
    SpdMatrix::from_diagonal(&[5.0, 5.0]).expect("positive diagonal")
}

/// `x_n = ((1 + 2/n, 10 - 1/√n), 1)` in `B_3^1`.
pub fn book_sequence(n: usize) -> BookPoint {
    assert!(n >= 1, "sequence is indexed from 1");
    let n = n as f64;
    BookPoint {
        sheet: 1,
        t: 1.0 + 2.0 / n,
        spine: vec![10.0 - 1.0 / n.sqrt()],
    }
}

/// `x = ((1, 10), 1)`, the limit of [`book_sequence`].
pub fn book_limit() -> BookPoint {
    BookPoint { sheet: 1, t: 1.0, spine: vec![10.0] }
}

/// `((1, 10), s)` with `s` uniform over the three sheets.
pub fn book_noise() -> RandomSheet {
    RandomSheet { sheets: 3, t: 1.0, spine: vec![10.0] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// The space's own geodesic distance.
    Intrinsic,
    /// Largest singular value of the difference (matrix experiments only).
    Spectral,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Intrinsic => "intrinsic",
            Metric::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One measured distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: ExperimentKind,
    pub estimator: EstimatorKind,
    pub replication: usize,
    pub n: usize,
    pub metric: Metric,
    pub value: f64,
}

/// A failure confined to one estimator of one replication (`n = 0` when the whole trace failed).
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub estimator: EstimatorKind,
    pub replication: usize,
    pub n: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: ExperimentConfig,
    /// Sorted by `(estimator, replication, n, metric)`.
    pub rows: Vec<Row>,
    pub errors: Vec<RowError>,
}

impl RunResult {
    pub fn value(&self, estimator: EstimatorKind, replication: usize, n: usize, metric: Metric) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.replication == replication && r.n == n && r.metric == metric)
            .map(|r| r.value)
    }

    /// Mean over replications at every traced step, ascending in `n`.
    pub fn mean_curve(&self, estimator: EstimatorKind, metric: Metric) -> Vec<(usize, f64)> {
        let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.estimator == estimator && r.metric == metric) {
            let e = acc.entry(r.n).or_insert((0.0, 0));
            e.0 += r.value;
            e.1 += 1;
        }
        acc.into_iter().map(|(n, (s, c))| (n, s / c as f64)).collect()
    }

    /// Rows as CSV under [`CSV_HEADER`], reals with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.16e}",
                r.experiment, r.estimator, r.replication, r.n, r.metric, r.value
            );
        }
        out
    }
}

pub const CSV_HEADER: &str = "experiment,estimator,replication,n,metric,value";

type ExtraMetric<'a, P> = Option<(Metric, &'a (dyn Fn(&P, &P) -> Result<f64> + Sync))>;

struct Replication<'a, S: GeodesicSpace> {
    space: &'a S,
    points: Vec<S::Point>,
    reference: &'a S::Point,
    extra: ExtraMetric<'a, S::Point>,
    config: &'a ExperimentConfig,
    index: usize,
    execution: Execution,
}

impl<S: GeodesicSpace> Replication<'_, S> {
    fn grid(&self) -> TraceGrid {
        TraceGrid::Stride(self.config.trace_stride)
    }

    fn opts(&self) -> TraceOptions<S::Point> {
        TraceOptions::new(self.grid(), Some(self.reference.clone()))
    }

    fn trace(&self, estimator: EstimatorKind, errors: &mut Vec<RowError>) -> Vec<TraceStep<S::Point>> {
        let fail = |n: usize, error: Error| RowError {
            estimator,
            replication: self.index,
            n,
            error,
        };
        let whole = |t: Result<MeanTrace<S::Point>>, errors: &mut Vec<RowError>| match t {
            Ok(t) => t.steps,
            Err(e) => {
                errors.push(fail(0, e));
                Vec::new()
            }
        };
        let (space, points) = (self.space, &self.points);
        match estimator {
            EstimatorKind::Inductive => whole(inductive_mean_traced(space, points, &self.opts()), errors),
            EstimatorKind::Resampled => {
                let seed = seed::derive(self.config.base_seed, Domain::Replication, self.index as u64);
                whole(resampled_mean_traced(space, points, seed, &self.opts()), errors)
            }
            EstimatorKind::Hansen => whole(hansen_mean_traced(space, points, &self.opts(), self.execution), errors),
            EstimatorKind::LimPalfia | EstimatorKind::EsSahib => {
                let steps = self.grid().steps(points.len());
                let exponent = self.config.lp_budget_exponent;
                let es_cfg = EsSahibConfig::default();
                let estimates = self.execution.map_slice(&steps, |&n| {
                    let prefix = &points[..n];
                    if estimator == EstimatorKind::LimPalfia {
                        let k = ((n as f64).powf(exponent).ceil() as usize).max(n);
                        lim_palfia(space, prefix, None, k).map(|r| r.estimate)
                    } else {
                        es_sahib_mean(space, prefix, &es_cfg)
                    }
                });
                let mut out = Vec::new();
                for (n, est) in steps.into_iter().zip(estimates) {
                    match est.and_then(|e| Ok((space.distance(&e, self.reference)?, e))) {
                        Ok((d, estimate)) => out.push(TraceStep {
                            n,
                            estimate,
                            dist_to_reference: Some(d),
                        }),
                        Err(e) => errors.push(fail(n, e)),
                    }
                }
                out
            }
        }
    }

    fn run(&self) -> (Vec<Row>, Vec<RowError>) {
        let mut rows = Vec::new();
        let mut errors = Vec::new();
        for &estimator in &self.config.estimators {
            for step in self.trace(estimator, &mut errors) {
                let row = |metric, value| Row {
                    experiment: self.config.experiment,
                    estimator,
                    replication: self.index,
                    n: step.n,
                    metric,
                    value,
                };
                rows.push(row(Metric::Intrinsic, step.dist_to_reference.expect("reference set")));
                if let Some((metric, f)) = self.extra {
                    match f(&step.estimate, self.reference) {
                        Ok(v) => rows.push(row(metric, v)),
                        Err(e) => errors.push(RowError {
                            estimator,
                            replication: self.index,
                            n: step.n,
                            error: e,
                        }),
                    }
                }
            }
        }
        (rows, errors)
    }
}

fn run_generic<S, N>(
    config: &ExperimentConfig,
    space: &S,
    clean: &[S::Point],
    noise: &N,
    reference: &S::Point,
    extra: ExtraMetric<'_, S::Point>,
    execution: Execution,
) -> Result<RunResult>
where
    S: GeodesicSpace,
    N: NoiseModel<S::Point> + Clone,
{
    let outputs = execution.map_range(config.replications, |r| -> Result<_> {
        let spec = ContaminationSpec::new(
            config.epsilon,
            noise.clone(),
            seed::derive(config.base_seed, Domain::ContaminationMask, r as u64),
        )?;
        let rep = Replication {
            space,
            points: huber_contaminate(clean, &spec)?,
            reference,
            extra,
            config,
            index: r,
            execution,
        };
        Ok(rep.run())
    });
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for out in outputs {
        let (r, e) = out?;
        rows.extend(r);
        errors.extend(e);
    }
    rows.sort_by(|a, b| {
        (a.estimator, a.replication, a.n, a.metric).cmp(&(b.estimator, b.replication, b.n, b.metric))
    });
    Ok(RunResult {
        config: config.clone(),
        rows,
        errors,
    })
}

/// Runs every replication of `config`, recording the distance of each
/// estimator to the sequence limit at every traced step.
pub fn run_experiment(config: &ExperimentConfig, execution: Execution) -> Result<RunResult> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::SpdDiagonal => {
            let space = SpdSpace::new(2);
            let clean: Vec<SpdMatrix> = (1..=config.n_max).map(spd_sequence).collect();
            let spectral = |a: &SpdMatrix, b: &SpdMatrix| spectral_distance(a, b);
            run_generic(
                config,
                &space,
                &clean,
                &FixedPoint(spd_noise()),
                &spd_limit(),
                Some((Metric::Spectral, &spectral)),
                execution,
            )
        }
        ExperimentKind::OpenBook => {
            let space = OpenBook::new(3, 1)?;
            let clean: Vec<BookPoint> = (1..=config.n_max).map(book_sequence).collect();
            run_generic(config, &space, &clean, &book_noise(), &book_limit(), None, execution)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        assert_eq!(spd_sequence(1), SpdMatrix::from_diagonal(&[1.1, 11.0]).unwrap());
        assert_eq!(spd_noise(), SpdMatrix::from_diagonal(&[5.0, 5.0]).unwrap());
        assert_eq!(book_sequence(1), BookPoint { sheet: 1, t: 3.0, spine: vec![9.0] });
        assert_eq!(book_sequence(4), BookPoint { sheet: 1, t: 1.5, spine: vec![9.5] });
        assert_eq!(book_limit(), BookPoint { sheet: 1, t: 1.0, spine: vec![10.0] });
    }

    fn small(experiment: ExperimentKind, estimators: Vec<EstimatorKind>) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            n_max: 60,
            epsilon: 0.1,
            estimators,
            replications: 3,
            base_seed: 11,
            trace_stride: 20,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let cfg = small(ExperimentKind::SpdDiagonal, vec![EstimatorKind::Resampled, EstimatorKind::Inductive]);
        let res = run_experiment(&cfg, Execution::Sequential).unwrap();
        // 2 estimators × 3 replications × 13 steps × 2 metrics
        assert_eq!(res.rows.len(), 2 * 3 * 13 * 2);
        assert!(res.errors.is_empty());
        let keys: Vec<_> = res.rows.iter().map(|r| (r.estimator, r.replication, r.n, r.metric)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(res.rows[0].estimator, EstimatorKind::Inductive);
    }

    #[test]
    fn execution_modes_agree() {
        let cfg = small(
            ExperimentKind::OpenBook,
            vec![EstimatorKind::Inductive, EstimatorKind::Hansen, EstimatorKind::LimPalfia],
        );
        let a = run_experiment(&cfg, Execution::Sequential).unwrap();
        let b = run_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.iter().all(|r| r.metric == Metric::Intrinsic));
    }

    #[test]
    fn capacity_errors_are_per_row() {
        let mut cfg = small(ExperimentKind::OpenBook, vec![EstimatorKind::EsSahib]);
        cfg.n_max = 12;
        cfg.replications = 1;
        let res = run_experiment(&cfg, Execution::Sequential).unwrap();
        let ok: Vec<usize> = res.rows.iter().map(|r| r.n).collect();
        assert_eq!(ok, [1, 2, 3, 4, 5, 6, 7, 8]);
        let failed: Vec<usize> = res.errors.iter().map(|e| e.n).collect();
        assert_eq!(failed, [9, 10, 12]);
        assert!(res.errors.iter().all(|e| matches!(e.error, Error::Capacity { .. })));
    }

    #[test]
    fn csv_layout() {
        let mut cfg = small(ExperimentKind::OpenBook, vec![EstimatorKind::Inductive]);
        cfg.n_max = 2;
        cfg.replications = 1;
        let csv = run_experiment(&cfg, Execution::Sequential).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("open-book,inductive,0,1,intrinsic,"));
        let value = lines[1].rsplit(',').next().unwrap();
        assert_eq!(value.split('e').next().unwrap().len(), 18);
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = ExperimentConfig {
            replications: 0,
            ..ExperimentConfig::default()
        };
        assert!(run_experiment(&cfg, Execution::Sequential).is_err());
    }
}
