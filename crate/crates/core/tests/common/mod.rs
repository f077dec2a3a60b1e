//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vhunt_core::{PointSet, Simplex};

/// Random simplex with coordinates in `[-scale, scale]` whose centered
/// `(K-1)`-th singular value is not tiny (nor `s_K` when `d >= K`).
pub fn random_simplex(rng: &mut ChaCha8Rng, k: usize, d: usize, scale: f64) -> Simplex {
    loop {
        let v = DMatrix::from_fn(d, k, |_, _| rng.gen_range(-scale..scale));
        if let Ok(s) = Simplex::new(v) {
            if s.centered_s_km1() > 0.05 * scale && (d < k || s.s_k() > 1e-6 * scale) {
                return s;
            }
        }
    }
}

/// Distance from `x` to the hull of the columns of `v` by enumerating every
/// face: project onto each face's affine hull and keep the projections with
/// nonnegative barycentric coordinates.
pub fn dist_by_faces(x: &DVector<f64>, v: &DMatrix<f64>) -> f64 {
    let k = v.ncols();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << k) {
        let face: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let v0 = v.column(face[0]).into_owned();
        if face.len() == 1 {
            best = best.min((x - &v0).norm());
            continue;
        }
        let b = DMatrix::from_fn(v.nrows(), face.len() - 1, |r, c| v[(r, face[c + 1])] - v0[r]);
        let rhs = x - &v0;
        let Ok(lambda) = b.clone().svd(true, true).solve(&rhs, 1e-12) else {
            continue;
        };
        let first = 1.0 - lambda.sum();
        if first < -1e-10 || lambda.iter().any(|&l| l < -1e-10) {
            continue;
        }
        best = best.min((rhs - b * lambda).norm());
    }
    best
}

/// Quadratic-time neighborhood scan: retained indices and their averages.
pub fn denoise_scan(y: &PointSet, n_min: usize, delta: f64) -> (Vec<usize>, Vec<Vec<f64>>) {
    let m = y.matrix();
    let (n, d) = (y.n(), y.d());
    let mut retained = Vec::new();
    let mut averages = Vec::new();
    for i in 0..n {
        let ball: Vec<usize> = (0..n)
            .filter(|&j| {
                let dist2: f64 = (0..d).map(|c| (m[(i, c)] - m[(j, c)]).powi(2)).sum();
                dist2 <= delta * delta
            })
            .collect();
        if ball.len() >= n_min {
            retained.push(i);
            averages.push(
                (0..d)
                    .map(|c| ball.iter().map(|&j| m[(j, c)]).sum::<f64>() / ball.len() as f64)
                    .collect(),
            );
        }
    }
    (retained, averages)
}

/// Minimum over all `K!` permutations of the largest matched column distance.
pub fn exhaustive_match(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    fn rec(est: &DMatrix<f64>, truth: &DMatrix<f64>, used: &mut Vec<bool>, k: usize, cur: f64) -> f64 {
        if k == truth.ncols() {
            return cur;
        }
        let mut best = f64::INFINITY;
        for j in 0..est.ncols() {
            if !used[j] {
                used[j] = true;
                let e = (est.column(j) - truth.column(k)).norm();
                best = best.min(rec(est, truth, used, k + 1, cur.max(e)));
                used[j] = false;
            }
        }
        best
    }
    rec(est, truth, &mut vec![false; est.ncols()], 0, 0.0)
}

/// Area of a triangle in 2-D or 3-D via the cross product.
pub fn triangle_area(v: &DMatrix<f64>) -> f64 {
    let col = |j: usize| {
        nalgebra::Vector3::new(v[(0, j)], v[(1, j)], if v.nrows() > 2 { v[(2, j)] } else { 0.0 })
    };
    0.5 * (col(1) - col(0)).cross(&(col(2) - col(0))).norm()
}

/// Half the smallest distance between a vertex and any point not equal to it.
pub fn isolating_radius(r: &PointSet, s: &Simplex) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..s.k() {
        let v = s.vertex(k);
        for i in 0..r.n() {
            let dist = (r.point(i) - &v).norm();
            if dist > 0.0 {
                best = best.min(dist);
            }
        }
        for j in 0..s.k() {
            if j != k {
                best = best.min((s.vertex(j) - &v).norm());
            }
        }
    }
    0.5 * best
}
