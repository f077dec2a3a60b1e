//! Error-bound quantities for SPA.
//!
//! The classical bound is `g(V) * beta(X)` with
//! `g(V) = 1 + 80 gamma^2 / s_K(V)^2` and `beta(X) = max_i ||eps_i||`.
//! The sharper bound replaces them with
//! `g_new(V) = 1 + 30 (gamma / s_{K-1}(V)) max(1, gamma / s_{K-1}(V))` and
//! `beta_new = max(max_i dist(X_i, S), max_k min_{i in J_k} ||X_i - v_k||)`,
//! where `J_k` holds the observations generated exactly at vertex `k`.
//! `gamma(V)` is the largest vertex norm throughout.

mod extreme;
mod tuning;

pub use extreme::{chi2_extreme_ratio, Chi2ExtremeRatio};
pub use tuning::{c2, theory_n_min, tuning_constants, Regime, TuningConstants};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VhError};
use crate::geometry::{dist_to_simplex, simplex_volume, PointSet, Simplex};

/// Singular values at or below this are treated as zero by `g` and `g_new`.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Default `c*` in the sharper bound's noise precondition.
pub const DEFAULT_C_STAR: f64 = 1.0 / 450.0;

pub fn gamma(s: &Simplex) -> f64 {
    s.max_vertex_norm()
}

/// `1 + 80 gamma^2 / s_K^2`.
pub fn g_classic_from(gamma: f64, s_k: f64) -> Result<f64> {
    if s_k <= SINGULAR_TOLERANCE {
        return Err(VhError::SingularConfiguration {
            quantity: "s_K(V)",
            value: s_k,
        });
    }
    Ok(1.0 + 80.0 * (gamma / s_k).powi(2))
}

/// `1 + 30 (gamma / s_{K-1}) max(1, gamma / s_{K-1})`.
pub fn g_new_from(gamma: f64, s_km1: f64) -> Result<f64> {
    if s_km1 <= SINGULAR_TOLERANCE {
        return Err(VhError::SingularConfiguration {
            quantity: "s_{K-1}(V)",
            value: s_km1,
        });
    }
    let ratio = gamma / s_km1;
    Ok(1.0 + 30.0 * ratio * ratio.max(1.0))
}

pub fn g_classic(s: &Simplex) -> Result<f64> {
    g_classic_from(gamma(s), s.s_k())
}

pub fn g_new(s: &Simplex) -> Result<f64> {
    g_new_from(gamma(s), s.s_km1())
}

/// `max_i ||X_i - R_i||`.
pub fn beta_classic(x: &PointSet, r: &PointSet) -> Result<f64> {
    same_shape(x, r)?;
    // contiguous vectors, so the norm matches the one used by `beta_new`
    Ok((0..x.n())
        .map(|i| (x.point(i) - r.point(i)).norm())
        .fold(0.0, f64::max))
}

fn same_shape(x: &PointSet, r: &PointSet) -> Result<()> {
    if x.d() != r.d() {
        return Err(VhError::DimensionMismatch {
            expected: r.d(),
            found: x.d(),
        });
    }
    if x.n() != r.n() {
        return Err(VhError::DimensionMismatch {
            expected: r.n(),
            found: x.n(),
        });
    }
    Ok(())
}

/// Observations generated exactly at each vertex: `J_k = {i : r_i = v_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureNodeMap {
    sets: Vec<Vec<usize>>,
}

impl PureNodeMap {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for set in sets.iter_mut() {
            set.sort_unstable();
            set.dedup();
            for &i in set.iter() {
                if !seen.insert(i) {
                    return Err(VhError::InvalidInput(format!(
                        "index {i} is assigned to more than one vertex"
                    )));
                }
            }
        }
        Ok(Self { sets })
    }

    /// Rows of `r` lying within `tol` of a vertex, grouped by vertex.
    pub fn from_noiseless(r: &PointSet, s: &Simplex, tol: f64) -> Result<Self> {
        if r.d() != s.d() {
            return Err(VhError::DimensionMismatch {
                expected: s.d(),
                found: r.d(),
            });
        }
        let mut sets = vec![Vec::new(); s.k()];
        for i in 0..r.n() {
            let p = r.point(i);
            if let Some(k) = (0..s.k()).find(|&k| (&p - s.vertex(k)).norm() <= tol) {
                sets[k].push(i);
            }
        }
        Self::new(sets)
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, k: usize) -> &[usize] {
        &self.sets[k]
    }

    /// `min_k |J_k|`.
    pub fn m(&self) -> usize {
        self.sets.iter().map(Vec::len).min().unwrap_or(0)
    }
}

/// `max(max_i dist(X_i, S), max_k min_{i in J_k} ||X_i - v_k||)`.
pub fn beta_new(x: &PointSet, s: &Simplex, pure: &PureNodeMap) -> Result<f64> {
    if x.d() != s.d() {
        return Err(VhError::DimensionMismatch {
            expected: s.d(),
            found: x.d(),
        });
    }
    if pure.k() != s.k() {
        return Err(VhError::DimensionMismatch {
            expected: s.k(),
            found: pure.k(),
        });
    }
    let mut outside = 0.0f64;
    for i in 0..x.n() {
        outside = outside.max(dist_to_simplex(&x.point(i), s)?);
    }
    let mut vertex_term = 0.0f64;
    for k in 0..s.k() {
        let v = s.vertex(k);
        let nearest = pure
            .set(k)
            .iter()
            .map(|&i| {
                if i >= x.n() {
                    Err(VhError::InvalidInput(format!("pure-node index {i} out of range")))
                } else {
                    Ok((x.point(i) - &v).norm())
                }
            })
            .try_fold(f64::INFINITY, |acc, d| d.map(|d| acc.min(d)))?;
        if nearest.is_infinite() {
            return Err(VhError::MissingPureNode { vertex: k });
        }
        vertex_term = vertex_term.max(nearest);
    }
    Ok(outside.max(vertex_term))
}

/// Vertex-only quantities of the two bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexFactors {
    pub gamma: f64,
    #[serde(rename = "sK")]
    pub s_k: f64,
    #[serde(rename = "sKm1")]
    pub s_km1: f64,
    pub centered_s_km1: f64,
    pub volume: f64,
    pub g_classic: f64,
    pub g_new: f64,
}

impl SimplexFactors {
    pub fn of(s: &Simplex) -> Result<Self> {
        Ok(Self {
            gamma: gamma(s),
            s_k: s.s_k(),
            s_km1: s.s_km1(),
            centered_s_km1: s.centered_s_km1(),
            volume: simplex_volume(s),
            g_classic: g_classic(s)?,
            g_new: g_new(s)?,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.g_new / self.g_classic
    }
}

/// Both bounds side by side, plus whether each theorem's noise
/// precondition holds. The flags are informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub gamma: f64,
    #[serde(rename = "sK")]
    pub s_k: f64,
    #[serde(rename = "sKm1")]
    pub s_km1: f64,
    pub g_classic: f64,
    pub g_new: f64,
    pub beta_classic: f64,
    pub beta_new: f64,
    pub bound_classic: f64,
    pub bound_new: f64,
    pub condition_classic_ok: bool,
    pub condition_new_ok: bool,
    pub c_star: f64,
}

/// Evaluates both bounds on observed points `x` with noiseless positions `r`.
pub fn bound_report(
    x: &PointSet,
    s: &Simplex,
    r: &PointSet,
    pure: &PureNodeMap,
    c_star: f64,
) -> Result<BoundReport> {
    same_shape(x, r)?;
    let gamma = gamma(s);
    let (s_k, s_km1) = (s.s_k(), s.s_km1());
    let g_classic = g_classic(s)?;
    let g_new = g_new(s)?;
    let beta_classic = beta_classic(x, r)?;
    let beta_new = beta_new(x, s, pure)?;

    let k = s.k() as f64;
    let classic_limit =
        s_k / g_classic * f64::min(1.0 / (2.0 * (k - 1.0).sqrt()), 0.25);
    let new_lhs = (gamma / s_km1).max(1.0) * beta_new;
    let new_rhs = c_star * s_km1 * s_km1 / gamma;

    Ok(BoundReport {
        gamma,
        s_k,
        s_km1,
        g_classic,
        g_new,
        beta_classic,
        beta_new,
        bound_classic: g_classic * beta_classic,
        bound_new: g_new * beta_new,
        condition_classic_ok: beta_classic <= classic_limit,
        condition_new_ok: new_lhs <= new_rhs,
        c_star,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRow {
    pub offset: f64,
    pub g_classic: f64,
    pub g_new: f64,
    pub ratio: f64,
}

/// `g`, `g_new` and their ratio for `V + a * direction 1'` over the offsets.
pub fn translation_sweep(
    base: &Simplex,
    direction: &DVector<f64>,
    offsets: &[f64],
) -> Result<Vec<TranslationRow>> {
    offsets
        .iter()
        .map(|&a| {
            let moved = base.translated(&(direction * a))?;
            let f = SimplexFactors::of(&moved)?;
            Ok(TranslationRow {
                offset: a,
                g_classic: f.g_classic,
                g_new: f.g_new,
                ratio: f.ratio(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn section3() -> Simplex {
        Simplex::from_vertex_rows(&[[20.0, 20.0, 10.0], [20.0, 30.0, 10.0], [30.0, 22.0, 10.0]])
            .unwrap()
    }

    #[test]
    fn gamma_is_max_vertex_norm() {
        assert_relative_eq!(gamma(&section3()), 1484f64.sqrt(), epsilon = 1e-12);
        let unit = Simplex::from_vertex_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert_relative_eq!(gamma(&unit), 1.0);
        let shifted = unit.translated(&DVector::from_element(3, 0.5)).unwrap();
        assert!((gamma(&shifted) - 1.0).abs() > 0.1);
    }

    #[test]
    fn plug_in_values() {
        assert_relative_eq!(g_classic_from(1.0, 1.0).unwrap(), 81.0);
        assert_relative_eq!(g_new_from(1.0, 2.0).unwrap(), 16.0);
        assert_relative_eq!(g_new_from(4.0, 2.0).unwrap(), 121.0);
    }

    #[test]
    fn singular_configurations() {
        assert!(matches!(
            g_classic_from(1.0, 0.0),
            Err(VhError::SingularConfiguration { quantity: "s_K(V)", .. })
        ));
        let flat = Simplex::from_vertex_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert!(matches!(
            g_new(&flat),
            Err(VhError::SingularConfiguration { quantity: "s_{K-1}(V)", .. })
        ));
    }

    #[test]
    fn beta_classic_three_four_five() {
        let r = PointSet::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let x = PointSet::from_rows(&[[0.0, 0.0], [4.0, 5.0]]).unwrap();
        assert_relative_eq!(beta_classic(&x, &r).unwrap(), 5.0);
        assert_eq!(beta_classic(&r, &r).unwrap(), 0.0);
        let bad = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(beta_classic(&bad, &r).is_err());
    }

    #[test]
    fn missing_pure_node() {
        let s = Simplex::from_vertex_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let x = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.2, 0.2]]).unwrap();
        let pure = PureNodeMap::new(vec![vec![0], vec![1], vec![]]).unwrap();
        assert_eq!(beta_new(&x, &s, &pure).unwrap_err(), VhError::MissingPureNode { vertex: 2 });
    }

    #[test]
    fn pure_node_sets_must_be_disjoint() {
        assert!(PureNodeMap::new(vec![vec![0, 1], vec![1]]).is_err());
        let m = PureNodeMap::new(vec![vec![3, 0], vec![1], vec![2, 4, 5]]).unwrap();
        assert_eq!(m.m(), 1);
        assert_eq!(m.set(0), &[0, 3]);
    }
}
