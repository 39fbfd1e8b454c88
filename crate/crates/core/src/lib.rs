//! Limiting free energy and phase structure of edge-weighted exponential
//! random graph models, plus the samplers used to check them at finite size.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `wergm` crate.
//!
//! * [`cramer`]: edge-weight laws, cumulant functions, the Cramér rate function.
//! * [`variational`]: the scalar maximization giving the limiting free energy.
//! * [`critical`]: the diagnostic functions `n`, `m`, `g`, `f` and the critical point.
//! * [`phase_curve`]: the two-maximizer region and the first-order transition curve.
//! * [`graphs`]: weighted graphs, homomorphism densities, Metropolis sampling.
//! * [`gaussian_directed`]: the exactly solvable directed Gaussian model.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cramer;
pub mod critical;
pub mod error;
pub mod gaussian_directed;
pub mod graphs;
pub mod phase_curve;
mod roots;
pub mod variational;

pub use cramer::{DualPair, EdgeDistribution, Endpoint, RatePoint};
pub use critical::CriticalData;
pub use error::{Error, Result};
pub use gaussian_directed::GaussianModelParams;
pub use graphs::{SubgraphSpec, TrajectoryStats, WeightedGraph};
pub use phase_curve::{BoundingPoint, PhaseCurvePoint};
pub use variational::{Classification, MaximizerSet, ModelParams};
