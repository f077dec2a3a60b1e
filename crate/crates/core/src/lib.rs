//! Vertex hunting: estimate the vertices of a simplex from noisy points
//! scattered around it.
//!
//! * [`spa`] — the successive projection algorithm.
//! * [`preprocess`] — hyperplane projection and neighborhood denoising.
//! * [`ppspa`] — pseudo-point SPA and the P-SPA / D-SPA ablations.
//! * [`bounds`] — classical and sharper error-bound quantities, tuning
//!   constants, chi-square extreme-value diagnostics.
//! * [`simbench`] — seeded synthetic experiments.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod ppspa;
pub mod preprocess;
pub mod rng;
pub mod simbench;
pub mod spa;

pub use error::{Result, VhError};
pub use geometry::{PointSet, Simplex, WeightVector};
pub use ppspa::{Algorithm, VhResult};
