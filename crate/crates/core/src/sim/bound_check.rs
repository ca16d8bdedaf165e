use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::means::{BoundParams, InductiveFold};
use crate::seed::{self, Domain};
use crate::space::{Euclidean, EuclideanPoint, GeodesicSpace};
use crate::spd::{SpdMatrix, SpdSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Gaussian points in `R^d` with drifting means and oscillating variances.
    EuclideanHetero,
    /// Diagonal SPD matrices whose log-entries are Gaussian with drifting means.
    SpdCommutingHetero,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::EuclideanHetero => "euclidean-hetero",
            GeneratorKind::SpdCommutingHetero => "spd-commuting-hetero",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "euclidean-hetero" => Ok(GeneratorKind::EuclideanHetero),
            "spd-commuting-hetero" => Ok(GeneratorKind::SpdCommutingHetero),
            other => Err(Error::Domain(format!("unknown generator '{other}'"))),
        }
    }
}

/// Independent, non-identically distributed samples with known means and variances.
///
/// In flat coordinates (Euclidean coordinates, or log-eigenvalues of diagonal
/// matrices) `X_k = m_k + σ_k Z` with `Z` standard normal,
/// `m_k = m + (o - m)/k` moving along the geodesic from the limit `m` to the
/// offset point `o = m + drift·(1, …, 1)`, and `σ_k = sigma·(1 + ½ sin k)`.
/// Diagonal matrices form a flat, totally geodesic subspace of the SPD
/// manifold, so the Fréchet mean of `X_k` is `exp(m_k)` and
/// `Var(X_k) = dim · σ_k²` in both cases.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroGenerator {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub drift: f64,
    pub sigma: f64,
}

impl HeteroGenerator {
    pub fn new(kind: GeneratorKind) -> Self {
        HeteroGenerator {
            kind,
            dim: match kind {
                GeneratorKind::EuclideanHetero => 3,
                GeneratorKind::SpdCommutingHetero => 2,
            },
            drift: 1.0,
            sigma: 1.0,
        }
    }

    fn base(&self) -> Vec<f64> {
        match self.kind {
            GeneratorKind::EuclideanHetero => vec![0.0; self.dim],
            GeneratorKind::SpdCommutingHetero => (0..self.dim).map(|i| (i as f64) - 1.0).collect(),
        }
    }

    fn flat_mean(&self, k: usize) -> Vec<f64> {
        self.base().into_iter().map(|m| m + self.drift / k as f64).collect()
    }

    pub fn sigma_at(&self, k: usize) -> f64 {
        self.sigma * (1.0 + 0.5 * (k as f64).sin())
    }

    pub fn variance_at(&self, k: usize) -> f64 {
        self.dim as f64 * self.sigma_at(k).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub n: usize,
    /// Mean of `d(S_n, μ)²` over replications.
    pub empirical: f64,
    /// Three standard errors of `empirical`.
    pub half_width: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub generator: GeneratorKind,
    pub replications: usize,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

trait FlatModel: GeodesicSpace {
    fn from_flat(&self, coords: Vec<f64>) -> Result<Self::Point>;
}

impl FlatModel for Euclidean {
    fn from_flat(&self, coords: Vec<f64>) -> Result<EuclideanPoint> {
        Ok(EuclideanPoint(coords))
    }
}

impl FlatModel for SpdSpace {
    fn from_flat(&self, coords: Vec<f64>) -> Result<SpdMatrix> {
        let d: Vec<f64> = coords.into_iter().map(f64::exp).collect();
        SpdMatrix::from_diagonal(&d)
    }
}

fn check_on<S: FlatModel>(
    space: &S,
    gen: &HeteroGenerator,
    grid: &[usize],
    replications: usize,
    base_seed: u64,
    execution: Execution,
) -> Result<BoundReport> {
    let n_max = *grid.iter().max().expect("non-empty grid");
    let mu = space.from_flat(gen.base())?;
    let mu_n = (1..=n_max)
        .map(|k| space.from_flat(gen.flat_mean(k)))
        .collect::<Result<Vec<_>>>()?;
    let var_n = (1..=n_max).map(|k| gen.variance_at(k)).collect();
    let params = BoundParams::new(mu.clone(), mu_n, var_n)?;
    let bounds = params.bounds(space)?;

    let per_rep = execution.map_range(replications, |r| -> Result<Vec<f64>> {
        let mut rng = seed::stream(base_seed, Domain::Generator, r as u64);
        let mut fold = InductiveFold::new();
        let mut out = Vec::with_capacity(grid.len());
        for k in 1..=n_max {
            let sigma = gen.sigma_at(k);
            let coords: Vec<f64> = gen
                .flat_mean(k)
                .into_iter()
                .map(|m| m + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let s = fold.push(space, &space.from_flat(coords)?)?;
            if grid.contains(&k) {
                out.push(space.distance(s, &mu)?.powi(2));
            }
        }
        Ok(out)
    });
    let per_rep = per_rep.into_iter().collect::<Result<Vec<_>>>()?;

    let mut sorted_grid = grid.to_vec();
    sorted_grid.sort_unstable();
    sorted_grid.dedup();
    let reps = replications as f64;
    let rows = sorted_grid
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let values: Vec<f64> = per_rep.iter().map(|v| v[j]).collect();
            let mean = values.iter().sum::<f64>() / reps;
            let var = if replications > 1 {
                values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1.0)
            } else {
                0.0
            };
            let half_width = 3.0 * (var / reps).sqrt();
            let bound = bounds[n - 1];
            BoundRow {
                n,
                empirical: mean,
                half_width,
                bound,
                pass: mean - half_width <= bound,
            }
        })
        .collect();
    Ok(BoundReport {
        generator: gen.kind,
        replications,
        rows,
    })
}

/// Compares the empirical `E d(S_n, μ)²` of the inductive mean against the
/// heteroscedastic law-of-large-numbers bound at every `n` in `grid`.
pub fn monte_carlo_bound_check(
    generator: &HeteroGenerator,
    grid: &[usize],
    replications: usize,
    base_seed: u64,
    execution: Execution,
) -> Result<BoundReport> {
    if grid.is_empty() || grid.contains(&0) {
        return Err(Error::domain("bound grid must be non-empty and start at n = 1 or later"));
    }
    if replications == 0 {
        return Err(Error::domain("bound check needs at least one replication"));
    }
    if !(generator.sigma >= 0.0) || generator.dim == 0 {
        return Err(Error::domain("generator needs a positive dimension and non-negative sigma"));
    }
    match generator.kind {
        GeneratorKind::EuclideanHetero => check_on(
            &Euclidean::new(generator.dim),
            generator,
            grid,
            replications,
            base_seed,
            execution,
        ),
        GeneratorKind::SpdCommutingHetero => check_on(
            &SpdSpace::new(generator.dim),
            generator,
            grid,
            replications,
            base_seed,
            execution,
        ),
    }
}
