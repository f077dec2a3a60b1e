//! The successive projection algorithm: pick the point with the largest
//! residual norm, project every residual onto the orthogonal complement of
//! that pick, repeat K times.

use nalgebra::DMatrix;

use crate::error::{Result, VhError};
use crate::geometry::PointSet;

/// Residual norms below this (relative to the largest starting norm, floored
/// at 1) count as a collapsed residual space.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaTrace {
    pub selected_indices: Vec<usize>,
    /// Residual norm of each pick at the moment it was picked.
    pub residual_norms: Vec<f64>,
    /// 1-based step at which every residual vanished, if it happened.
    pub degenerate_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaOutput {
    /// `d x K`; column `k` is the original point picked at step `k`.
    pub vertices: DMatrix<f64>,
    pub trace: SpaTrace,
}

/// Runs SPA and fails if fewer than `k` non-degenerate picks exist.
pub fn spa(x: &PointSet, k: usize) -> Result<SpaOutput> {
    let trace = spa_trace(x, k)?;
    if let Some(step) = trace.degenerate_at {
        return Err(VhError::DegenerateRank { step });
    }
    let vertices = DMatrix::from_fn(x.d(), k, |r, c| x.matrix()[(trace.selected_indices[c], r)]);
    Ok(SpaOutput { vertices, trace })
}

/// Runs the greedy loop and reports where it stopped.
///
/// Each point is handled in homogeneous form `(1, x_i)`, so the K picks span
/// the affine hull of the data rather than its linear span. Without the
/// leading 1, points confined to K-1 dimensions (every projected pp-SPA
/// input) leave nothing to pick at step K. Ties in the residual norm go to
/// the smallest index.
pub fn spa_trace(x: &PointSet, k: usize) -> Result<SpaTrace> {
    let n = x.n();
    if k == 0 {
        return Err(VhError::InvalidInput("K must be at least 1".into()));
    }
    if n < k {
        return Err(VhError::InsufficientPoints { n, k });
    }
    let width = x.d() + 1;
    let m = x.matrix();
    let mut residuals = vec![0.0; n * width];
    for i in 0..n {
        let row = &mut residuals[i * width..(i + 1) * width];
        row[0] = 1.0;
        for j in 0..x.d() {
            row[j + 1] = m[(i, j)];
        }
    }

    let mut trace = SpaTrace {
        selected_indices: Vec::with_capacity(k),
        residual_norms: Vec::with_capacity(k),
        degenerate_at: None,
    };
    let mut direction: Option<Vec<f64>> = None;
    let mut floor = 0.0;

    for step in 1..=k {
        if let Some(u) = &direction {
            for row in residuals.chunks_exact_mut(width) {
                let dot: f64 = row.iter().zip(u).map(|(a, b)| a * b).sum();
                for (r, ui) in row.iter_mut().zip(u) {
                    *r -= dot * ui;
                }
            }
        }
        let (best, best_sq) = residuals
            .chunks_exact(width)
            .map(|row| row.iter().map(|v| v * v).sum::<f64>())
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, sq)| {
                if sq > acc.1 {
                    (i, sq)
                } else {
                    acc
                }
            });
        let norm = best_sq.sqrt();
        if step == 1 {
            floor = DEGENERACY_TOLERANCE * norm.max(1.0);
        }
        if norm < floor {
            trace.degenerate_at = Some(step);
            return Ok(trace);
        }
        trace.selected_indices.push(best);
        trace.residual_norms.push(norm);
        let row = &residuals[best * width..(best + 1) * width];
        direction = Some(row.iter().map(|v| v / norm).collect());
    }
    Ok(trace)
}
