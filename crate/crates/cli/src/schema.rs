//! JSON shapes written by the commands.

use serde::{Deserialize, Serialize};
use vhunt_core::bounds::{BoundReport, SimplexFactors, TranslationRow};
use vhunt_core::VhResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutput {
    pub center: Vec<f64>,
    /// The `K-1` orthonormal basis vectors, each of length `d`.
    pub basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigOutput {
    pub n_min: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntOutput {
    pub algorithm: String,
    pub k: usize,
    /// One estimated vertex per entry.
    pub vertices: Vec<Vec<f64>>,
    /// Positions within the retained (pseudo-)points.
    pub selected_indices: Vec<usize>,
    /// The same picks as input row numbers (0-based).
    pub source_indices: Vec<usize>,
    pub retained_count: usize,
    pub fit: Option<FitOutput>,
    pub config: Option<ConfigOutput>,
    pub seed: u64,
}

impl HuntOutput {
    pub fn new(res: &VhResult, seed: u64) -> Self {
        let columns = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
            m.column_iter().map(|c| c.iter().copied().collect()).collect()
        };
        Self {
            algorithm: res.algorithm.tag().to_string(),
            k: res.k(),
            vertices: columns(&res.vertices),
            selected_indices: res.selected_indices.clone(),
            source_indices: res.source_indices.clone(),
            retained_count: res.retained.len(),
            fit: res.fit.as_ref().map(|f| FitOutput {
                center: f.center.iter().copied().collect(),
                basis: columns(&f.basis),
            }),
            config: res.config.map(|c| ConfigOutput {
                n_min: c.n_min,
                delta: c.delta,
            }),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutput {
    /// Quantities that depend on the vertices only; absent for a flat base
    /// simplex given only to seed a translation sweep.
    pub factors: Option<SimplexFactors>,
    /// Present when observed points were supplied or simulated.
    pub report: Option<BoundReport>,
    pub translation: Option<Vec<TranslationRow>>,
    pub seed: Option<u64>,
}
