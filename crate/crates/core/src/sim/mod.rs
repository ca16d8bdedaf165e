//! Contamination harness: seeded Huber ε-contamination, the diagonal-SPD and
//! open-book experiments, and the Monte-Carlo check of the heteroscedastic
//! law-of-large-numbers bound.
//!
//! All randomness of replication `r` derives from `(base_seed, r)`, so
//! replications can run in any order or in parallel and adding replications
//! never changes existing rows.

mod bound_check;
mod config;
mod contamination;
mod experiment;

pub use bound_check::{monte_carlo_bound_check, BoundReport, BoundRow, GeneratorKind, HeteroGenerator};
pub use config::{ExperimentConfig, ExperimentKind};
pub use contamination::{
    contamination_mask, huber_contaminate, ContaminationSpec, FixedPoint, NoiseModel, RandomSheet,
};
pub use experiment::{
    book_limit, book_noise, book_sequence, run_experiment, CSV_HEADER, spd_limit, spd_noise, spd_sequence, Metric,
    Row, RowError, RunResult,
};
