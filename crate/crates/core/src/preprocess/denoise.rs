use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kdtree::KdTree;
use crate::bounds::{theory_n_min, tuning_constants, Regime};
use crate::error::{Result, VhError};
use crate::geometry::PointSet;

/// How the neighborhood radius is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    Explicit(f64),
    /// `c2 * t_n * sigma` in the `delta_n = log log n / log n` regime.
    Theoretical { sigma: f64 },
    /// `max_i ||Y_i - Ybar|| / 5`.
    Heuristic,
}

/// Denoising intent: minimum neighbor count and radius rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenoiseConfig {
    pub n_min: usize,
    pub delta: DeltaRule,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self::practical()
    }
}

impl DenoiseConfig {
    /// `N = 3` with the heuristic radius.
    pub fn practical() -> Self {
        Self {
            n_min: 3,
            delta: DeltaRule::Heuristic,
        }
    }

    /// `N = round(ln n)` with the theoretical radius for noise level `sigma`.
    pub fn theoretical(n: usize, sigma: f64) -> Self {
        Self {
            n_min: theory_n_min(n),
            delta: DeltaRule::Theoretical { sigma },
        }
    }

    pub fn explicit(n_min: usize, delta: f64) -> Self {
        Self {
            n_min,
            delta: DeltaRule::Explicit(delta),
        }
    }

    /// Resolves the radius on the points that will actually be denoised.
    /// `k` is the number of vertices (needed by the theoretical rule).
    pub fn resolve(&self, y: &PointSet, k: usize) -> Result<DenoiseParams> {
        if self.n_min == 0 {
            return Err(VhError::InvalidInput("N must be at least 1".into()));
        }
        let delta = match self.delta {
            DeltaRule::Explicit(v) => v,
            DeltaRule::Heuristic => default_delta(y),
            DeltaRule::Theoretical { sigma } => {
                let n = y.n().max(2);
                let ln = (n as f64).ln();
                let delta_n = (ln.ln() / ln).max(0.0);
                tuning_constants(n, k.max(2), y.d(), sigma, Regime::DeltaN(delta_n), None)?
                    .delta_theory
            }
        };
        DenoiseParams::new(self.n_min, delta)
    }
}

/// A resolved `(N, delta)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenoiseParams {
    pub n_min: usize,
    pub delta: f64,
}

impl DenoiseParams {
    pub fn new(n_min: usize, delta: f64) -> Result<Self> {
        if n_min == 0 {
            return Err(VhError::InvalidInput("N must be at least 1".into()));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(VhError::InvalidDelta(delta));
        }
        Ok(Self { n_min, delta })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseOutcome {
    /// One row per retained index, in the order of `retained`.
    pub pseudo_points: PointSet,
    /// Ascending original indices that kept at least `N` neighbors.
    pub retained: Vec<usize>,
    /// `#{j : ||Y_j - Y_i|| <= delta}` for every input point, self included.
    pub neighbor_counts: Vec<usize>,
}

/// `max_i ||Y_i - Ybar|| / 5`.
pub fn default_delta(y: &PointSet) -> f64 {
    let mean = y.mean();
    (0..y.n())
        .map(|i| (y.point(i) - &mean).norm())
        .fold(0.0, f64::max)
        / 5.0
}

/// Replaces every point by the mean of all original points within `delta`
/// (closed ball, self included) and drops points with fewer than `N` such
/// neighbors. Averages are taken over the untouched input in one pass, and
/// dropped points still count in the balls of the points that stay.
pub fn denoise(y: &PointSet, params: DenoiseParams) -> Result<DenoiseOutcome> {
    let DenoiseParams { n_min, delta } = DenoiseParams::new(params.n_min, params.delta)?;
    let m = y.matrix();
    let tree = KdTree::build(m);
    let per_point: Vec<(usize, Option<Vec<f64>>)> = (0..y.n())
        .into_par_iter()
        .map(|i| {
            let nb = tree.within_radius(i, delta);
            let count = nb.len();
            if count < n_min {
                return (count, None);
            }
            let mut acc = vec![0.0; y.d()];
            for &j in &nb {
                for (c, a) in acc.iter_mut().enumerate() {
                    *a += m[(j, c)];
                }
            }
            for a in acc.iter_mut() {
                *a /= count as f64;
            }
            (count, Some(acc))
        })
        .collect();

    let neighbor_counts: Vec<usize> = per_point.iter().map(|(c, _)| *c).collect();
    let retained: Vec<usize> = per_point
        .iter()
        .enumerate()
        .filter_map(|(i, (_, avg))| avg.as_ref().map(|_| i))
        .collect();
    if retained.is_empty() {
        return Err(VhError::AllPointsPruned { n_min, delta });
    }
    let rows: Vec<&Vec<f64>> = per_point.iter().filter_map(|(_, a)| a.as_ref()).collect();
    let pseudo = DMatrix::from_fn(rows.len(), y.d(), |r, c| rows[r][c]);
    Ok(DenoiseOutcome {
        pseudo_points: PointSet::new(pseudo)?,
        retained,
        neighbor_counts,
    })
}
