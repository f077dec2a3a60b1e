use nalgebra::{DMatrix, DVector};

use crate::error::{Result, VhError};
use crate::geometry::PointSet;

/// Least-squares `(K-1)`-dimensional affine hyperplane through a point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneFit {
    /// Mean of the rows.
    pub center: DVector<f64>,
    /// `d x (K-1)`, orthonormal columns; each column's largest-magnitude
    /// entry is positive.
    pub basis: DMatrix<f64>,
    /// Sum of the discarded squared singular values of the centered data.
    pub residual_energy: f64,
}

impl HyperplaneFit {
    pub fn projector_rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn d(&self) -> usize {
        self.basis.nrows()
    }

    /// `(I - UU') center + U y`: a projected coordinate back in `R^d`.
    pub fn lift(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        if y.len() != self.projector_rank() {
            return Err(VhError::DimensionMismatch {
                expected: self.projector_rank(),
                found: y.len(),
            });
        }
        let offset = &self.center - &self.basis * (self.basis.transpose() * &self.center);
        Ok(offset + &self.basis * y)
    }

    /// Lifts every column of a `(K-1) x m` matrix.
    pub fn lift_columns(&self, cols: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.d(), cols.ncols());
        for (j, c) in cols.column_iter().enumerate() {
            out.set_column(j, &self.lift(&c.into_owned())?);
        }
        Ok(out)
    }

    /// Copy with the chosen basis columns negated.
    pub fn with_sign_flips(&self, flips: &[bool]) -> HyperplaneFit {
        let mut basis = self.basis.clone();
        for (j, &flip) in flips.iter().enumerate().take(basis.ncols()) {
            if flip {
                basis.column_mut(j).neg_mut();
            }
        }
        HyperplaneFit {
            basis,
            ..self.clone()
        }
    }

    /// `S(center, UU')` on `x`.
    pub fn sum_sq_distance(&self, x: &PointSet) -> f64 {
        sum_sq_distance_to_plane(x, &self.center, &self.basis)
    }
}

/// `sum_i ||(I - H)(x_i - origin)||^2` with `H` the orthogonal projector onto
/// the column span of `basis` (columns must be orthonormal).
pub fn sum_sq_distance_to_plane(x: &PointSet, origin: &DVector<f64>, basis: &DMatrix<f64>) -> f64 {
    (0..x.n())
        .map(|i| {
            let z = x.point(i) - origin;
            let along = basis * (basis.transpose() * &z);
            (z - along).norm_squared()
        })
        .sum()
}

/// Fits the hyperplane minimising the summed squared distances: center at the
/// row mean, basis from the top `K-1` singular vectors of the centered data.
pub fn fit_hyperplane(x: &PointSet, k: usize) -> Result<HyperplaneFit> {
    let (n, d) = (x.n(), x.d());
    if k < 2 {
        return Err(VhError::InvalidInput(format!(
            "a hyperplane fit needs K >= 2, got {k}"
        )));
    }
    if n < k {
        return Err(VhError::InsufficientPoints { n, k });
    }
    if d < k - 1 {
        return Err(VhError::ProjectionNotApplicable { d, k });
    }
    let center = x.mean();
    let mut z = x.matrix().clone();
    for mut row in z.row_iter_mut() {
        row -= center.transpose();
    }
    let svd = z.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });

    let mut basis = DMatrix::zeros(d, k - 1);
    for (j, &src) in order.iter().take(k - 1).enumerate() {
        let mut col = v_t.row(src).transpose();
        let pivot = col
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc })
            .0;
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        basis.set_column(j, &col);
    }
    let residual_energy = order
        .iter()
        .skip(k - 1)
        .map(|&i| svd.singular_values[i].powi(2))
        .sum();
    Ok(HyperplaneFit {
        center,
        basis,
        residual_energy,
    })
}

/// Row `i` of the result is `U' x_i`.
pub fn project_to_plane(x: &PointSet, fit: &HyperplaneFit) -> Result<PointSet> {
    if x.d() != fit.d() {
        return Err(VhError::DimensionMismatch {
            expected: fit.d(),
            found: x.d(),
        });
    }
    PointSet::new(x.matrix() * &fit.basis)
}
