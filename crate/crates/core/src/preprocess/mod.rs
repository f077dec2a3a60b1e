//! Hyperplane projection and pseudo-point denoising, the two preprocessing
//! steps in front of SPA.

mod denoise;
mod hyperplane;
mod kdtree;

pub use denoise::{default_delta, denoise, DeltaRule, DenoiseConfig, DenoiseOutcome, DenoiseParams};
pub use hyperplane::{fit_hyperplane, project_to_plane, sum_sq_distance_to_plane, HyperplaneFit};
pub use kdtree::{row_distance_sq, KdTree};
