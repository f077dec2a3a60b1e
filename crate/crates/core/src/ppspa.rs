//! Pseudo-point SPA and its two ablations.
//!
//! | variant | hyperplane projection | neighborhood denoise |
//! |---------|-----------------------|----------------------|
//! | SPA     | -                     | -                    |
//! | P-SPA   | yes                   | -                    |
//! | D-SPA   | -                     | yes                  |
//! | PP-SPA  | yes                   | yes                  |
//!
//! Projection is skipped whenever `d <= K-1`: the data already lives in a
//! space no larger than the simplex's own hyperplane.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VhError};
use crate::geometry::PointSet;
use crate::preprocess::{
    denoise, fit_hyperplane, project_to_plane, DenoiseConfig, DenoiseParams, HyperplaneFit,
};
use crate::spa::spa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "P-SPA")]
    PSpa,
    #[serde(rename = "D-SPA")]
    DSpa,
    #[serde(rename = "PP-SPA")]
    PpSpa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Spa,
        Algorithm::PSpa,
        Algorithm::DSpa,
        Algorithm::PpSpa,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Spa => "SPA",
            Algorithm::PSpa => "P-SPA",
            Algorithm::DSpa => "D-SPA",
            Algorithm::PpSpa => "PP-SPA",
        }
    }

    pub fn projects(self) -> bool {
        matches!(self, Algorithm::PSpa | Algorithm::PpSpa)
    }

    pub fn denoises(self) -> bool {
        matches!(self, Algorithm::DSpa | Algorithm::PpSpa)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "spa" => Ok(Algorithm::Spa),
            "pspa" => Ok(Algorithm::PSpa),
            "dspa" => Ok(Algorithm::DSpa),
            "ppspa" => Ok(Algorithm::PpSpa),
            _ => Err(format!(
                "unknown algorithm '{s}' (expected spa, pspa, dspa or ppspa)"
            )),
        }
    }
}

/// Estimated vertices plus everything needed to trace how they were found.
#[derive(Debug, Clone, PartialEq)]
pub struct VhResult {
    pub algorithm: Algorithm,
    /// `d x K`, original coordinates.
    pub vertices: DMatrix<f64>,
    /// Positions of the picks within the retained (pseudo-)point list.
    pub selected_indices: Vec<usize>,
    /// The same picks as indices into the input rows.
    pub source_indices: Vec<usize>,
    /// Input rows that survived denoising (all rows when not denoising).
    pub retained: Vec<usize>,
    pub fit: Option<HyperplaneFit>,
    /// Vertices in projected coordinates, `(K-1) x K`, when a fit was used.
    pub projected_vertices: Option<DMatrix<f64>>,
    pub config: Option<DenoiseParams>,
}

impl VhResult {
    pub fn k(&self) -> usize {
        self.vertices.ncols()
    }
}

fn projection_applies(x: &PointSet, k: usize) -> bool {
    k >= 2 && x.d() > k - 1
}

/// Orthodox SPA wrapped as a [`VhResult`].
pub fn spa_result(x: &PointSet, k: usize) -> Result<VhResult> {
    pipeline(Algorithm::Spa, x, k, None, None)
}

/// Projection then SPA.
pub fn p_spa(x: &PointSet, k: usize) -> Result<VhResult> {
    let fit = if projection_applies(x, k) {
        Some(fit_hyperplane(x, k)?)
    } else {
        None
    };
    pipeline(Algorithm::PSpa, x, k, fit, None)
}

/// Denoise in the original space then SPA.
pub fn d_spa(x: &PointSet, k: usize, cfg: &DenoiseConfig) -> Result<VhResult> {
    pipeline(Algorithm::DSpa, x, k, None, Some(cfg))
}

/// Projection, denoise, SPA, and lift back to `R^d`.
pub fn pp_spa(x: &PointSet, k: usize, cfg: &DenoiseConfig) -> Result<VhResult> {
    let fit = if projection_applies(x, k) {
        Some(fit_hyperplane(x, k)?)
    } else {
        None
    };
    pipeline(Algorithm::PpSpa, x, k, fit, Some(cfg))
}

/// pp-SPA with a caller-supplied hyperplane (for instance one with flipped
/// basis signs, or one fitted on other data).
pub fn pp_spa_with_fit(
    x: &PointSet,
    k: usize,
    fit: &HyperplaneFit,
    cfg: &DenoiseConfig,
) -> Result<VhResult> {
    pipeline(Algorithm::PpSpa, x, k, Some(fit.clone()), Some(cfg))
}

/// Dispatch by tag. `cfg` is ignored by the variants that do not denoise.
pub fn run_algorithm(
    algorithm: Algorithm,
    x: &PointSet,
    k: usize,
    cfg: &DenoiseConfig,
) -> Result<VhResult> {
    match algorithm {
        Algorithm::Spa => spa_result(x, k),
        Algorithm::PSpa => p_spa(x, k),
        Algorithm::DSpa => d_spa(x, k, cfg),
        Algorithm::PpSpa => pp_spa(x, k, cfg),
    }
}

fn pipeline(
    algorithm: Algorithm,
    x: &PointSet,
    k: usize,
    fit: Option<HyperplaneFit>,
    cfg: Option<&DenoiseConfig>,
) -> Result<VhResult> {
    if k == 0 {
        return Err(VhError::InvalidInput("K must be at least 1".into()));
    }
    if x.n() < k {
        return Err(VhError::InsufficientPoints { n: x.n(), k });
    }
    let projected = match &fit {
        Some(f) => project_to_plane(x, f)?,
        None => x.clone(),
    };

    let (points, retained, config) = match cfg {
        Some(cfg) => {
            let params = cfg.resolve(&projected, k)?;
            let too_few = |retained: usize| VhError::TooFewRetained {
                retained,
                k,
                n_min: params.n_min,
                delta: params.delta,
            };
            let outcome = denoise(&projected, params).map_err(|e| match e {
                VhError::AllPointsPruned { .. } => too_few(0),
                other => other,
            })?;
            if outcome.retained.len() < k {
                return Err(too_few(outcome.retained.len()));
            }
            (outcome.pseudo_points, outcome.retained, Some(params))
        }
        None => (projected, (0..x.n()).collect(), None),
    };

    let picked = spa(&points, k)?;
    let selected_indices = picked.trace.selected_indices;
    let source_indices = selected_indices.iter().map(|&i| retained[i]).collect();
    let (vertices, projected_vertices) = match &fit {
        Some(f) => (f.lift_columns(&picked.vertices)?, Some(picked.vertices)),
        None => (picked.vertices, None),
    };

    Ok(VhResult {
        algorithm,
        vertices,
        selected_indices,
        source_indices,
        retained,
        fit,
        projected_vertices,
        config,
    })
}
