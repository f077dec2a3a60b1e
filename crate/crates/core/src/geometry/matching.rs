use nalgebra::DMatrix;

use crate::error::{Result, VhError};

/// Largest K for which matching enumerates all K! permutations.
pub const EXHAUSTIVE_MATCH_MAX_K: usize = 8;

/// Pairing of estimated with true vertices that minimises the largest error.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMatch {
    /// `permutation[k]` is the estimated column matched to true vertex `k`.
    pub permutation: Vec<usize>,
    pub max_error: f64,
    pub per_vertex_errors: Vec<f64>,
}

/// Matches the columns of `estimated` to the columns of `truth` (both `d x K`)
/// minimising `max_k ||estimated[perm[k]] - truth[k]||`.
///
/// For `K <= 8` every permutation is tried in lexicographic order and the
/// first minimiser wins; above that a bottleneck assignment is used.
pub fn match_vertices(estimated: &DMatrix<f64>, truth: &DMatrix<f64>) -> Result<VertexMatch> {
    if estimated.ncols() != truth.ncols() {
        return Err(VhError::DimensionMismatch {
            expected: truth.ncols(),
            found: estimated.ncols(),
        });
    }
    if estimated.nrows() != truth.nrows() {
        return Err(VhError::DimensionMismatch {
            expected: truth.nrows(),
            found: estimated.nrows(),
        });
    }
    let k = truth.ncols();
    if k == 0 {
        return Err(VhError::InvalidInput("no vertices to match".into()));
    }
    // cost[t][e]
    let cost: Vec<Vec<f64>> = (0..k)
        .map(|t| {
            (0..k)
                .map(|e| (estimated.column(e) - truth.column(t)).norm())
                .collect()
        })
        .collect();

    let permutation = if k <= EXHAUSTIVE_MATCH_MAX_K {
        exhaustive(&cost)
    } else {
        bottleneck(&cost)
    };
    let per_vertex_errors: Vec<f64> = (0..k).map(|t| cost[t][permutation[t]]).collect();
    let max_error = per_vertex_errors.iter().copied().fold(0.0, f64::max);
    Ok(VertexMatch {
        permutation,
        max_error,
        per_vertex_errors,
    })
}

fn exhaustive(cost: &[Vec<f64>]) -> Vec<usize> {
    let k = cost.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = perm.clone();
    let mut best_val = f64::INFINITY;
    loop {
        let val = (0..k).map(|t| cost[t][perm[t]]).fold(0.0, f64::max);
        if val < best_val {
            best_val = val;
            best.clone_from(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Smallest threshold admitting a perfect matching, found by binary search
/// over the sorted edge costs.
fn bottleneck(cost: &[Vec<f64>]) -> Vec<usize> {
    let mut levels: Vec<f64> = cost.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(cost, levels[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    perfect_matching(cost, levels[lo]).expect("the full cost set always admits a matching")
}

/// Kuhn's augmenting-path matching on edges with cost `<= threshold`.
fn perfect_matching(cost: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let k = cost.len();
    let mut owner: Vec<Option<usize>> = vec![None; k];

    fn augment(
        t: usize,
        cost: &[Vec<f64>],
        threshold: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for e in 0..cost.len() {
            if cost[t][e] <= threshold && !seen[e] {
                seen[e] = true;
                if owner[e].map_or(true, |o| augment(o, cost, threshold, seen, owner)) {
                    owner[e] = Some(t);
                    return true;
                }
            }
        }
        false
    }

    for t in 0..k {
        let mut seen = vec![false; k];
        if !augment(t, cost, threshold, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut perm = vec![0; k];
    for (e, o) in owner.iter().enumerate() {
        perm[o.expect("perfect matching")] = e;
    }
    Some(perm)
}
