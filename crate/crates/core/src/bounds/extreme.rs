use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VhError};
use crate::rng::stream;

/// Monte Carlo means of `M_n / (2 log n)` and `M_n / d`, where `M_n` is the
/// maximum of `n` independent chi-square(d) draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chi2ExtremeRatio {
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub mean_max: f64,
    /// Undefined for `n = 1`.
    pub mean_ratio_2logn: Option<f64>,
    pub mean_ratio_d: f64,
}

/// Each trial draws from its own stream `(seed, trial)`, so the estimate
/// does not depend on how trials are scheduled across threads.
pub fn chi2_extreme_ratio(n: usize, d: usize, trials: usize, seed: u64) -> Result<Chi2ExtremeRatio> {
    if trials == 0 || n == 0 || d == 0 {
        return Err(VhError::InvalidInput(format!(
            "n, d and trials must be positive (n = {n}, d = {d}, trials = {trials})"
        )));
    }
    let maxima: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, &[t as u64]);
            let mut best = 0.0f64;
            for _ in 0..n {
                let mut chi2 = 0.0;
                for _ in 0..d {
                    let z: f64 = rng.sample(StandardNormal);
                    chi2 += z * z;
                }
                best = best.max(chi2);
            }
            best
        })
        .collect();
    let mean_max = maxima.iter().sum::<f64>() / trials as f64;
    let two_log_n = 2.0 * (n as f64).ln();
    Ok(Chi2ExtremeRatio {
        n,
        d,
        trials,
        mean_max,
        mean_ratio_2logn: (n > 1).then(|| mean_max / two_log_n),
        mean_ratio_d: mean_max / d as f64,
    })
}
