use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Result, VhError};

/// Which pure-node regime the thresholds are computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// A constant fraction of points at every vertex; `(K-1)/log n << delta_n << 1`.
    DeltaN(f64),
    /// At least `n^{1-c0+delta}` points at every vertex, `0 < c0 < 1`.
    C0(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningConstants {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub sigma: f64,
    pub regime: Regime,
    pub c2: f64,
    /// Radius constant actually used: `c2` for `DeltaN`, `e^{c0/(K-1)} c2` for `C0`.
    pub c3: f64,
    pub t_n: Option<f64>,
    pub t_n_star: Option<f64>,
    /// Needs `s_{K-1}(V~)`; absent when the caller does not know it.
    pub alpha_n: Option<f64>,
    pub b_n: f64,
    pub n_theory: usize,
    /// `c3 * t * sigma` with `t` the regime's threshold.
    pub delta_theory: f64,
}

/// `0.5 (2e^2)^{-1/(K-1)} sqrt(2/(K-1)) Gamma((K+1)/2)^{1/(K-1)}`, evaluated
/// in log space. Tends to `0.5/sqrt(e)` as `K` grows.
pub fn c2(k: usize) -> f64 {
    let p = (k - 1) as f64;
    let log = 0.5f64.ln() - (2.0f64.ln() + 2.0) / p + 0.5 * (2.0 / p).ln()
        + ln_gamma((k as f64 + 1.0) / 2.0) / p;
    log.exp()
}

/// `N = round(ln n)`, at least 1.
pub fn theory_n_min(n: usize) -> usize {
    ((n.max(1) as f64).ln().round() as usize).max(1)
}

fn threshold(n: usize, k: usize, exponent: f64) -> f64 {
    let nf = n as f64;
    let p = (k - 1) as f64;
    p.sqrt() * (nf.ln() / nf.powf(1.0 - exponent)).powf(1.0 / p)
}

/// Theoretical tuning quantities for pp-SPA.
///
/// `centered_s_km1` is `s_{K-1}(V~)`; without it `alpha_n` is omitted.
pub fn tuning_constants(
    n: usize,
    k: usize,
    d: usize,
    sigma: f64,
    regime: Regime,
    centered_s_km1: Option<f64>,
) -> Result<TuningConstants> {
    if n < 2 {
        return Err(VhError::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if k < 2 {
        return Err(VhError::InvalidInput(format!("K must be at least 2, got {k}")));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(VhError::InvalidInput(format!("sigma must be >= 0, got {sigma}")));
    }
    let nf = n as f64;
    let log_n = nf.ln();
    let spread = (d as f64).max(2.0 * log_n).sqrt();
    let c2 = c2(k);
    let (c3, t_n, t_n_star, t) = match regime {
        Regime::DeltaN(delta_n) => {
            let t = threshold(n, k, delta_n);
            (c2, Some(t), None, t)
        }
        Regime::C0(c0) => {
            if !(0.0..1.0).contains(&c0) {
                return Err(VhError::InvalidInput(format!("c0 must lie in (0, 1), got {c0}")));
            }
            let t = threshold(n, k, c0);
            ((c0 / (k - 1) as f64).exp() * c2, None, Some(t), t)
        }
    };
    let alpha_n = match centered_s_km1 {
        Some(s) if s > 0.0 => Some((d as f64).sqrt() / (nf.sqrt() * s * s) * (1.0 + sigma * spread)),
        Some(s) => {
            return Err(VhError::SingularConfiguration {
                quantity: "s_{K-1}(V~)",
                value: s,
            })
        }
        None => None,
    };
    Ok(TuningConstants {
        n,
        k,
        d,
        sigma,
        regime,
        c2,
        c3,
        t_n,
        t_n_star,
        alpha_n,
        b_n: 2.0 * sigma / nf.sqrt() * spread,
        n_theory: theory_n_min(n),
        delta_theory: c3 * t * sigma,
    })
}
