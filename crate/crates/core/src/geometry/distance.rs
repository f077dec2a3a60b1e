use nalgebra::{DMatrix, DVector};

use super::Simplex;
use crate::error::{Result, VhError};

/// Closest point of a convex hull to a query, in barycentric form.
#[derive(Debug, Clone, PartialEq)]
pub struct HullProjection {
    pub weights: Vec<f64>,
    pub point: DVector<f64>,
    pub distance: f64,
    pub converged: bool,
}

/// Euclidean distance from `x` to the simplex; zero inside the hull.
pub fn dist_to_simplex(x: &DVector<f64>, s: &Simplex) -> Result<f64> {
    nearest_in_hull(x, s.vertices()).map(|p| p.distance)
}

/// Solves `min ||V w - x||` over the probability simplex `w >= 0, sum w = 1`
/// with a primal active-set method.
///
/// The objective is written in the shifted frame `W = V - x 1'`, so the
/// residual at the optimum is directly `W w`. Each inner step solves the
/// equality-constrained least-squares problem on the free set through an
/// affine parametrisation and an SVD solve, which keeps affinely dependent
/// free sets well defined.
pub fn nearest_in_hull(x: &DVector<f64>, vertices: &DMatrix<f64>) -> Result<HullProjection> {
    let (d, k) = vertices.shape();
    if x.len() != d {
        return Err(VhError::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    if k == 0 {
        return Err(VhError::InvalidInput("empty vertex set".into()));
    }
    let mut shifted = vertices.clone();
    for mut col in shifted.column_iter_mut() {
        col -= x;
    }
    let scale = shifted
        .column_iter()
        .map(|c| c.norm_squared())
        .fold(0.0, f64::max);
    let grad_tol = 1e-14 * scale.max(f64::MIN_POSITIVE);

    // start at the nearest vertex
    let start = (0..k)
        .min_by(|&a, &b| {
            shifted
                .column(a)
                .norm_squared()
                .total_cmp(&shifted.column(b).norm_squared())
        })
        .unwrap();
    let mut w = vec![0.0; k];
    w[start] = 1.0;
    let mut free = vec![start];
    let cap = (10 * k * k).max(32);
    let mut converged = false;

    for _ in 0..cap {
        let z = solve_on_free_set(&shifted, &free);
        if free.iter().all(|&i| z[i] >= 0.0) {
            w = z;
            let residual = &shifted * DVector::from_column_slice(&w);
            let grad = shifted.transpose() * &residual;
            let mu = residual.norm_squared();
            let entering = (0..k)
                .filter(|i| !free.contains(i))
                .map(|i| (i, grad[i] - mu))
                .filter(|&(_, g)| g < -grad_tol)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match entering {
                Some((i, _)) => {
                    free.push(i);
                    free.sort_unstable();
                }
                None => {
                    converged = true;
                    break;
                }
            }
        } else {
            // step towards z until the first free weight hits zero
            let mut alpha = 1.0;
            for &i in &free {
                if z[i] < 0.0 {
                    alpha = f64::min(alpha, w[i] / (w[i] - z[i]));
                }
            }
            for &i in &free {
                w[i] += alpha * (z[i] - w[i]);
            }
            let blocking = free
                .iter()
                .copied()
                .filter(|&i| z[i] < 0.0)
                .min_by(|&a, &b| w[a].total_cmp(&w[b]))
                .unwrap();
            w[blocking] = 0.0;
            free.retain(|&i| i != blocking && w[i] > 0.0);
            if free.is_empty() {
                // cannot happen for a feasible iterate; restart from the start vertex
                w = vec![0.0; k];
                w[start] = 1.0;
                free.push(start);
            }
        }
    }

    for v in w.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= total;
    }
    let wv = DVector::from_column_slice(&w);
    let point = vertices * &wv;
    // measured in the original frame so a vertex solution gives exactly ||x - v_k||
    let distance = (x - &point).norm();
    Ok(HullProjection {
        weights: w,
        point,
        distance,
        converged,
    })
}

/// Minimiser of `||W z||` over `z` supported on `free` with `sum z = 1`
/// (no sign constraint). Returned as a full-length vector.
fn solve_on_free_set(shifted: &DMatrix<f64>, free: &[usize]) -> Vec<f64> {
    let k = shifted.ncols();
    let mut z = vec![0.0; k];
    let anchor = free[0];
    if free.len() == 1 {
        z[anchor] = 1.0;
        return z;
    }
    let base = shifted.column(anchor).into_owned();
    let dirs = DMatrix::from_fn(shifted.nrows(), free.len() - 1, |r, c| {
        shifted[(r, free[c + 1])] - base[r]
    });
    let svd = dirs.svd(true, true);
    let top = svd.singular_values.max();
    let eps = 1e-13 * top.max(f64::MIN_POSITIVE);
    let t = svd
        .solve(&(-&base), eps)
        .unwrap_or_else(|_| DVector::zeros(free.len() - 1));
    let mut anchor_weight = 1.0;
    for (c, &i) in free[1..].iter().enumerate() {
        z[i] = t[c];
        anchor_weight -= t[c];
    }
    z[anchor] = anchor_weight;
    z
}
