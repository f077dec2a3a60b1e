//! Point sets, simplices and the geometric primitives shared by every
//! vertex-hunting routine: singular-value diagnostics, volume, distance to
//! the simplex and permutation matching of estimated against true vertices.

mod distance;
mod matching;

pub use distance::{dist_to_simplex, nearest_in_hull, HullProjection};
pub use matching::{match_vertices, VertexMatch, EXHAUSTIVE_MATCH_MAX_K};

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, VhError};

/// Relative cut below which a singular value is treated as an exact zero.
const RANK_EPS: f64 = 1e-12;

/// `n` points in `R^d`, stored row-wise (row `i` is point `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: DMatrix<f64>,
}

impl PointSet {
    pub fn new(points: DMatrix<f64>) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(VhError::InvalidInput(format!(
                "point set must be non-empty, got {}x{}",
                points.nrows(),
                points.ncols()
            )));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            // column-major storage
            let (r, c) = (pos % points.nrows(), pos / points.nrows());
            return Err(VhError::InvalidInput(format!(
                "non-finite coordinate at point {r}, column {c}"
            )));
        }
        Ok(Self { points })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.as_ref().len() != d) {
            return Err(VhError::InvalidInput(format!(
                "row {i} has {} coordinates, expected {d}",
                r.as_ref().len()
            )));
        }
        Self::new(DMatrix::from_fn(n, d, |i, j| rows[i].as_ref()[j]))
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn d(&self) -> usize {
        self.points.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.points
    }

    /// Point `i` as a column vector.
    pub fn point(&self, i: usize) -> DVector<f64> {
        self.points.row(i).transpose()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.points.row(i).iter().copied().collect())
            .collect()
    }

    pub fn mean(&self) -> DVector<f64> {
        self.points.row_mean().transpose()
    }

    /// Sub-set of the rows in the given order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        PointSet {
            points: self.points.select_rows(indices),
        }
    }
}

/// Singular values of `m`, nonincreasing.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// A simplex given by the `d x K` vertex matrix `V` (column `k` is `v_k`), with
/// its centered form and singular values computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: DMatrix<f64>,
    center: DVector<f64>,
    centered: DMatrix<f64>,
    /// `s_1(V) >= ... >= s_K(V)`, zero-padded when `d < K`.
    sv: Vec<f64>,
    /// `s_1(V~) >= ... >= s_{K-1}(V~)`.
    sv_centered: Vec<f64>,
}

impl Simplex {
    pub fn new(vertices: DMatrix<f64>) -> Result<Self> {
        let (d, k) = vertices.shape();
        if k < 2 {
            return Err(VhError::InvalidInput(format!(
                "a simplex needs K >= 2 vertices, got {k}"
            )));
        }
        if d + 1 < k {
            return Err(VhError::InvalidInput(format!(
                "a simplex with K = {k} vertices needs d >= K-1, got d = {d}"
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(VhError::InvalidInput("non-finite vertex coordinate".into()));
        }
        let center = vertices.column_mean();
        let mut centered = vertices.clone();
        for mut col in centered.column_iter_mut() {
            col -= &center;
        }
        let mut sv = singular_values(&vertices);
        sv.resize(k, 0.0);
        let mut sv_centered = singular_values(&centered);
        sv_centered.resize(k, 0.0);
        sv_centered.truncate(k - 1);
        Ok(Self {
            vertices,
            center,
            centered,
            sv,
            sv_centered,
        })
    }

    /// Build from vertices given one per row.
    pub fn from_vertex_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let k = rows.len();
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != d) {
            return Err(VhError::InvalidInput("ragged vertex rows".into()));
        }
        Self::new(DMatrix::from_fn(d, k, |i, j| rows[j].as_ref()[i]))
    }

    pub fn k(&self) -> usize {
        self.vertices.ncols()
    }

    pub fn d(&self) -> usize {
        self.vertices.nrows()
    }

    pub fn vertices(&self) -> &DMatrix<f64> {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> DVector<f64> {
        self.vertices.column(k).into_owned()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn centered(&self) -> &DMatrix<f64> {
        &self.centered
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sv
    }

    pub fn centered_singular_values(&self) -> &[f64] {
        &self.sv_centered
    }

    /// `s_K(V)`.
    pub fn s_k(&self) -> f64 {
        self.sv[self.k() - 1]
    }

    /// `s_{K-1}(V)`.
    pub fn s_km1(&self) -> f64 {
        self.sv[self.k() - 2]
    }

    /// `s_{K-1}(V~)`.
    pub fn centered_s_km1(&self) -> f64 {
        self.sv_centered[self.k() - 2]
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Same simplex moved by `offset`.
    pub fn translated(&self, offset: &DVector<f64>) -> Result<Simplex> {
        if offset.len() != self.d() {
            return Err(VhError::DimensionMismatch {
                expected: self.d(),
                found: offset.len(),
            });
        }
        let mut v = self.vertices.clone();
        for mut col in v.column_iter_mut() {
            col += offset;
        }
        Simplex::new(v)
    }

    /// `V w` for a weight vector.
    pub fn combine(&self, w: &WeightVector) -> Result<DVector<f64>> {
        if w.len() != self.k() {
            return Err(VhError::DimensionMismatch {
                expected: self.k(),
                found: w.len(),
            });
        }
        Ok(&self.vertices * DVector::from_column_slice(w.as_slice()))
    }
}

/// `(K-1)`-volume of the simplex, `sqrt(K)/(K-1)! * prod_{k<K} s_k(V~)`.
/// Flat simplices report exactly zero.
pub fn simplex_volume(s: &Simplex) -> f64 {
    let k = s.k();
    let sv = s.centered_singular_values();
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 || sv[k - 2] <= RANK_EPS * top {
        return 0.0;
    }
    let factorial: f64 = (1..k).map(|i| i as f64).product();
    (k as f64).sqrt() / factorial * sv.iter().product::<f64>()
}

/// Nonnegative weights with unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(VhError::InvalidInput("empty weight vector".into()));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(VhError::InvalidInput(format!(
                "weights must be finite and nonnegative: {w:?}"
            )));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(VhError::InvalidInput(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(w))
    }

    /// The `k`-th standard basis vector of length `len`.
    pub fn basis(len: usize, k: usize) -> Self {
        let mut w = vec![0.0; len];
        w[k] = 1.0;
        Self(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}
