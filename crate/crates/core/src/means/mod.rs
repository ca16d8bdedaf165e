//! Sequential mean constructions, each generic over [`GeodesicSpace`].
//!
//! Streaming estimators emit a [`MeanTrace`]: the estimate after selected
//! steps, optionally with its distance to a reference point.

mod bound;
mod es_sahib;
mod hansen;
mod inductive;
mod resampled;

pub use bound::{slln_bound, BoundParams};
pub use es_sahib::{es_sahib_mean, EsSahibConfig};
pub use hansen::{hansen, hansen_mean, hansen_mean_traced};
pub use inductive::{inductive_mean, inductive_mean_traced, weighted_mean_toeplitz, InductiveFold};
pub use resampled::{resample_index, resampled_mean, resampled_mean_traced};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::space::GeodesicSpace;

/// The estimators this crate can trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimatorKind {
    Inductive,
    Hansen,
    EsSahib,
    Resampled,
    LimPalfia,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::Inductive,
        EstimatorKind::Hansen,
        EstimatorKind::EsSahib,
        EstimatorKind::Resampled,
        EstimatorKind::LimPalfia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Inductive => "inductive",
            EstimatorKind::Hansen => "hansen",
            EstimatorKind::EsSahib => "es-sahib",
            EstimatorKind::Resampled => "resampled",
            EstimatorKind::LimPalfia => "lim-palfia",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Domain(format!("unknown estimator '{s}'")))
    }
}

/// Which steps a trace keeps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TraceGrid {
    #[default]
    Every,
    /// Steps `1..=10`, every multiple of the stride, and the final step.
    Stride(usize),
    /// Only the final step.
    Last,
    /// Exactly these steps (those beyond the sequence length are ignored).
    Points(Vec<usize>),
}

impl TraceGrid {
    const HEAD: usize = 10;

    pub fn contains(&self, n: usize, n_max: usize) -> bool {
        match self {
            TraceGrid::Every => true,
            TraceGrid::Stride(s) => n <= Self::HEAD || n == n_max || n % (*s).max(1) == 0,
            TraceGrid::Last => n == n_max,
            TraceGrid::Points(ps) => ps.contains(&n),
        }
    }

    /// The traced steps of a sequence of length `n_max`, ascending.
    pub fn steps(&self, n_max: usize) -> Vec<usize> {
        match self {
            TraceGrid::Points(ps) => {
                let mut v: Vec<usize> = ps.iter().copied().filter(|n| (1..=n_max).contains(n)).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
            _ => (1..=n_max).filter(|n| self.contains(*n, n_max)).collect(),
        }
    }
}

/// Options shared by the traced estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions<P> {
    pub grid: TraceGrid,
    pub reference: Option<P>,
}

impl<P> Default for TraceOptions<P> {
    fn default() -> Self {
        TraceOptions {
            grid: TraceGrid::Every,
            reference: None,
        }
    }
}

impl<P> TraceOptions<P> {
    pub fn new(grid: TraceGrid, reference: Option<P>) -> Self {
        TraceOptions { grid, reference }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep<P> {
    pub n: usize,
    pub estimate: P,
    pub dist_to_reference: Option<f64>,
}

/// Per-step record of an estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanTrace<P> {
    pub estimator: EstimatorKind,
    pub seed: Option<u64>,
    pub steps: Vec<TraceStep<P>>,
}

impl<P> MeanTrace<P> {
    fn new(estimator: EstimatorKind, seed: Option<u64>) -> Self {
        MeanTrace {
            estimator,
            seed,
            steps: Vec::new(),
        }
    }

    pub fn last(&self) -> Option<&TraceStep<P>> {
        self.steps.last()
    }

    /// Estimate after the final step. Traces are never empty once built.
    pub fn final_estimate(&self) -> &P {
        &self.steps.last().expect("trace has at least one step").estimate
    }

    pub fn at(&self, n: usize) -> Option<&TraceStep<P>> {
        self.steps
            .binary_search_by_key(&n, |s| s.n)
            .ok()
            .map(|i| &self.steps[i])
    }
}

fn record<S: GeodesicSpace>(
    space: &S,
    trace: &mut MeanTrace<S::Point>,
    opts: &TraceOptions<S::Point>,
    n: usize,
    estimate: &S::Point,
) -> Result<()> {
    let dist_to_reference = match &opts.reference {
        Some(r) => Some(space.distance(estimate, r)?),
        None => None,
    };
    trace.steps.push(TraceStep {
        n,
        estimate: estimate.clone(),
        dist_to_reference,
    });
    Ok(())
}

fn nonempty<P>(points: &[P], what: &str) -> Result<()> {
    if points.is_empty() {
        Err(Error::Domain(format!("{what} of an empty sequence")))
    } else {
        Ok(())
    }
}
