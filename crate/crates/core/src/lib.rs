//! Metric geometry and mean estimation on spaces of non-positive curvature.
//!
//! Everything generic is written against [`GeodesicSpace`]: a distance plus the
//! unique minimal geodesic between two points. Three instances ship with the
//! crate: flat [`Euclidean`] space, the affine-invariant manifold of symmetric
//! positive-definite matrices ([`SpdSpace`]) and open books ([`OpenBook`]).
//!
//! On top of those sit the sequential means in [`means`], the Lim–Palfia
//! barycenter scheme and exact oracles in [`frechet`], and the contamination
//! harness in [`sim`].

pub mod book;
pub mod error;
pub mod exec;
pub mod frechet;
pub mod means;
pub mod seed;
pub mod sim;
pub mod space;
pub mod spd;

pub use book::{BookPoint, OpenBook};
pub use error::{Error, Result};
pub use exec::Execution;
pub use frechet::{lim_palfia, FrechetOracle, LpResult};
pub use means::{EstimatorKind, MeanTrace, TraceGrid, TraceStep};
pub use space::{Euclidean, EuclideanPoint, GeodesicSpace, Weights};
pub use spd::{SpdMatrix, SpdSpace, SymEigen};
