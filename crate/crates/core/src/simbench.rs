//! Seeded synthetic data and the sweep experiments comparing SPA, P-SPA,
//! D-SPA and PP-SPA.
//!
//! Data follow `X_i = r_i + eps_i`: the `r_i` are drawn uniformly from a
//! planar triangle (plus exact copies of each vertex), embedded into `R^d`
//! by padding with zeros, and perturbed by isotropic Gaussian noise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::PureNodeMap;
use crate::error::{Result, VhError};
use crate::geometry::{match_vertices, PointSet, Simplex, WeightVector};
use crate::ppspa::{run_algorithm, Algorithm};
use crate::preprocess::DenoiseConfig;
use crate::rng::{derive_seed, stream};

/// The triangle used by every preset.
pub const BASE_TRIANGLE: [[f64; 2]; 3] = [[1.0, 1.0], [2.0, 4.0], [5.0, 2.0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Exp1,
    Exp2,
    Exp3,
    Fig1,
    Custom,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exp1" => Ok(Preset::Exp1),
            "exp2" => Ok(Preset::Exp2),
            "exp3" => Ok(Preset::Exp3),
            "fig1" => Ok(Preset::Fig1),
            _ => Err(format!("unknown preset '{s}' (expected exp1, exp2, exp3 or fig1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    D,
    Sigma,
    N,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::D => "d",
            SweepParam::Sigma => "sigma",
            SweepParam::N => "n",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: Preset,
    /// One vertex per row, in the base (planar) space.
    pub base_vertices: Vec<Vec<f64>>,
    pub sweep_param: SweepParam,
    pub sweep_values: Vec<f64>,
    pub n: usize,
    pub d: usize,
    pub sigma: f64,
    pub reps: usize,
    pub pure_per_vertex: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub denoise: DenoiseConfig,
}

impl ExperimentSpec {
    fn base(id: Preset, reps: usize, seed: u64) -> Self {
        Self {
            id,
            base_vertices: BASE_TRIANGLE.iter().map(|v| v.to_vec()).collect(),
            sweep_param: SweepParam::D,
            sweep_values: vec![],
            n: 1000,
            d: 4,
            sigma: 1.0,
            reps,
            pure_per_vertex: 10,
            seed,
            algorithms: Algorithm::ALL.to_vec(),
            denoise: DenoiseConfig::practical(),
        }
    }

    /// `(n, sigma) = (1000, 1)`, `d` in `1..=50`.
    pub fn exp1(reps: usize, seed: u64) -> Self {
        Self {
            sweep_values: (1..=50).map(f64::from).collect(),
            ..Self::base(Preset::Exp1, reps, seed)
        }
    }

    /// `(n, d) = (1000, 4)`, `sigma` in `0.2, 0.3, ..., 2.0`.
    pub fn exp2(reps: usize, seed: u64) -> Self {
        Self {
            sweep_param: SweepParam::Sigma,
            sweep_values: (2..=20).map(|i| f64::from(i) / 10.0).collect(),
            ..Self::base(Preset::Exp2, reps, seed)
        }
    }

    /// `(d, sigma) = (4, 1)`, `n` in `500, 600, ..., 1500`.
    pub fn exp3(reps: usize, seed: u64) -> Self {
        Self {
            sweep_param: SweepParam::N,
            sweep_values: (5..=15).map(|i| f64::from(i * 100)).collect(),
            ..Self::base(Preset::Exp3, reps, seed)
        }
    }

    /// `(n, K, d, sigma) = (1000, 3, 2, 1)`, uniform on the triangle, no
    /// vertex copies.
    pub fn fig1(reps: usize, seed: u64) -> Self {
        Self {
            sweep_values: vec![2.0],
            d: 2,
            pure_per_vertex: 0,
            ..Self::base(Preset::Fig1, reps, seed)
        }
    }

    pub fn preset(id: Preset, reps: usize, seed: u64) -> Result<Self> {
        match id {
            Preset::Exp1 => Ok(Self::exp1(reps, seed)),
            Preset::Exp2 => Ok(Self::exp2(reps, seed)),
            Preset::Exp3 => Ok(Self::exp3(reps, seed)),
            Preset::Fig1 => Ok(Self::fig1(reps, seed)),
            Preset::Custom => Err(VhError::InvalidInput(
                "custom experiments are read from a spec file".into(),
            )),
        }
    }

    pub fn base_simplex(&self) -> Result<Simplex> {
        Simplex::from_vertex_rows(&self.base_vertices)
    }

    /// `(n, d, sigma)` with the swept parameter replaced by `value`.
    pub fn setting(&self, value: f64) -> (usize, usize, f64) {
        match self.sweep_param {
            SweepParam::D => (self.n, value as usize, self.sigma),
            SweepParam::Sigma => (self.n, self.d, value),
            SweepParam::N => (value as usize, self.d, self.sigma),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(VhError::InvalidInput(m));
        if self.reps == 0 {
            return invalid("reps must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return invalid("no algorithms selected".into());
        }
        if self.sweep_values.is_empty() {
            return invalid("empty sweep".into());
        }
        let simplex = self.base_simplex()?;
        for &v in &self.sweep_values {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("sweep values must be positive, got {v}"));
            }
            if self.sweep_param != SweepParam::Sigma && v.fract() != 0.0 {
                return invalid(format!("{} must be an integer, got {v}", self.sweep_param));
            }
            let (n, d, sigma) = self.setting(v);
            if d == 0 || !(sigma >= 0.0) {
                return invalid(format!("invalid setting n = {n}, d = {d}, sigma = {sigma}"));
            }
            if n < simplex.k() * self.pure_per_vertex || n < simplex.k() {
                return invalid(format!(
                    "n = {n} cannot hold {} copies of each of {} vertices",
                    self.pure_per_vertex,
                    simplex.k()
                ));
            }
        }
        Ok(())
    }
}

/// Noiseless points with the vertex copies marked.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPoints {
    pub r: PointSet,
    pub pure: PureNodeMap,
    pub weights: Vec<WeightVector>,
}

/// `n - K * pure_per_vertex` points uniform on the simplex (symmetric
/// Dirichlet weights via normalised exponentials), followed by
/// `pure_per_vertex` exact copies of each vertex.
pub fn sample_simplex_points(
    s: &Simplex,
    n: usize,
    pure_per_vertex: usize,
    seed: u64,
) -> Result<SampledPoints> {
    let k = s.k();
    if n < k * pure_per_vertex || n == 0 {
        return Err(VhError::InvalidInput(format!(
            "n = {n} is too small for {pure_per_vertex} copies of {k} vertices"
        )));
    }
    let mut rng = stream(seed, &[0]);
    let uniform = n - k * pure_per_vertex;
    let mut weights = Vec::with_capacity(n);
    for _ in 0..uniform {
        let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        weights.push(WeightVector::new(raw.iter().map(|v| v / total).collect())?);
    }
    let mut sets = vec![Vec::with_capacity(pure_per_vertex); k];
    for (v, set) in sets.iter_mut().enumerate() {
        for _ in 0..pure_per_vertex {
            set.push(weights.len());
            weights.push(WeightVector::basis(k, v));
        }
    }
    let mut r = DMatrix::zeros(n, s.d());
    for (i, w) in weights.iter().enumerate() {
        let p = if w.as_slice().iter().filter(|&&x| x == 1.0).count() == 1 {
            // exact vertex copy
            let v = w.as_slice().iter().position(|&x| x == 1.0).unwrap();
            s.vertex(v)
        } else {
            s.combine(w)?
        };
        r.set_row(i, &p.transpose());
    }
    Ok(SampledPoints {
        r: PointSet::new(r)?,
        pure: PureNodeMap::new(sets)?,
        weights,
    })
}

/// `A x` where `A` holds the first columns of `I_d` (or the first `d` rows of
/// the identity when the base dimension exceeds `d`).
pub fn embed(m: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    let base = m.ncols();
    DMatrix::from_fn(m.nrows(), d, |i, j| if j < base { m[(i, j)] } else { 0.0 })
}

/// Embeds planar points into `R^d` and adds `N(0, sigma^2 I_d)` noise.
pub fn embed_and_noise(r: &PointSet, d: usize, sigma: f64, seed: u64) -> Result<PointSet> {
    if d == 0 {
        return Err(VhError::InvalidInput("d must be at least 1".into()));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(VhError::InvalidInput(format!("sigma must be >= 0, got {sigma}")));
    }
    let mut x = embed(r.matrix(), d);
    if sigma > 0.0 {
        let mut rng = stream(seed, &[1]);
        // row by row so a row's noise does not depend on n
        for i in 0..x.nrows() {
            for j in 0..d {
                let z: f64 = rng.sample(StandardNormal);
                x[(i, j)] += sigma * z;
            }
        }
    }
    PointSet::new(x)
}

/// True vertices as a `d x K` matrix in the embedded space.
pub fn embedded_vertices(s: &Simplex, d: usize) -> DMatrix<f64> {
    embed(&s.vertices().transpose(), d).transpose()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub mean_error: Option<f64>,
    pub sd_error: Option<f64>,
    pub n_success: usize,
    pub n_reps: usize,
    /// Failure name -> count, for reps that did not produce an estimate.
    pub failures: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    /// Sweep-value major, then algorithms in spec order.
    pub cells: Vec<CellResult>,
    /// `rep_seeds[s][r]` generated rep `r` of sweep value `s`.
    pub rep_seeds: Vec<Vec<u64>>,
}

impl ExperimentResult {
    pub fn cell(&self, sweep_value: f64, algorithm: Algorithm) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.sweep_value == sweep_value && c.algorithm == algorithm)
    }
}

/// Seed of one repetition, keyed by the sweep value itself so reordering the
/// sweep does not change any cell.
pub fn rep_seed(master: u64, sweep_value: f64, rep: usize) -> u64 {
    derive_seed(master, &[sweep_value.to_bits(), rep as u64])
}

/// Generates one repetition's data and scores each algorithm by the matched
/// max vertex error. Failures are reported by error name.
pub fn run_rep(
    spec: &ExperimentSpec,
    simplex: &Simplex,
    sweep_value: f64,
    seed: u64,
) -> Result<Vec<std::result::Result<f64, String>>> {
    let (n, d, sigma) = spec.setting(sweep_value);
    let sample = sample_simplex_points(simplex, n, spec.pure_per_vertex, seed)?;
    let x = embed_and_noise(&sample.r, d, sigma, seed)?;
    let truth = embedded_vertices(simplex, d);
    Ok(spec
        .algorithms
        .iter()
        .map(|&alg| {
            run_algorithm(alg, &x, simplex.k(), &spec.denoise)
                .and_then(|res| match_vertices(&res.vertices, &truth))
                .map(|m| m.max_error)
                .map_err(|e| e.name().to_string())
        })
        .collect())
}

/// Runs every (sweep value, rep) pair in parallel on the current rayon pool
/// and aggregates in a fixed order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let simplex = spec.base_simplex()?;
    let tasks: Vec<(usize, usize)> = (0..spec.sweep_values.len())
        .flat_map(|s| (0..spec.reps).map(move |r| (s, r)))
        .collect();
    let outcomes: Vec<Vec<std::result::Result<f64, String>>> = tasks
        .par_iter()
        .map(|&(s, r)| {
            let value = spec.sweep_values[s];
            run_rep(spec, &simplex, value, rep_seed(spec.seed, value, r))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    let mut rep_seeds = Vec::new();
    for (s, &value) in spec.sweep_values.iter().enumerate() {
        rep_seeds.push((0..spec.reps).map(|r| rep_seed(spec.seed, value, r)).collect());
        let reps = &outcomes[s * spec.reps..(s + 1) * spec.reps];
        for (a, &algorithm) in spec.algorithms.iter().enumerate() {
            let mut errors = Vec::new();
            let mut failures = BTreeMap::new();
            for rep in reps {
                match &rep[a] {
                    Ok(e) => errors.push(*e),
                    Err(name) => *failures.entry(name.clone()).or_insert(0) += 1,
                }
            }
            let (mean_error, sd_error) = mean_sd(&errors);
            cells.push(CellResult {
                sweep_value: value,
                algorithm,
                mean_error,
                sd_error,
                n_success: errors.len(),
                n_reps: spec.reps,
                failures,
            });
        }
    }
    Ok(ExperimentResult {
        spec: spec.clone(),
        cells,
        rep_seeds,
    })
}

/// Mean and sample standard deviation (zero for a single value).
fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}
