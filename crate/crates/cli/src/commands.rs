use nalgebra::DVector;
use vhunt_core::bounds::{
    bound_report, translation_sweep, tuning_constants, PureNodeMap, Regime, SimplexFactors,
};
use vhunt_core::ppspa::run_algorithm;
use vhunt_core::preprocess::{DeltaRule, DenoiseConfig};
use vhunt_core::simbench::{
    embed_and_noise, run_experiment, sample_simplex_points, ExperimentResult, ExperimentSpec,
};
use vhunt_core::{PointSet, Simplex};

use crate::io::{self, fmt_real};
use crate::schema::{BoundsOutput, HuntOutput};
use crate::{BoundsArgs, CliError, DeltaArg, Format, HuntArgs, SimulateArgs, TuningArgs};

/// Environment variable capping the worker threads of `simulate` (0 = auto).
pub const THREADS_ENV: &str = "VH_THREADS";

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn hunt(a: &HuntArgs) -> Result<(), CliError> {
    if a.n_min == 0 {
        return Err(usage("--n-min must be at least 1"));
    }
    let delta = match a.delta {
        DeltaArg::Value(v) => DeltaRule::Explicit(v),
        DeltaArg::Heuristic => DeltaRule::Heuristic,
        DeltaArg::Theory => match a.sigma {
            Some(sigma) if sigma.is_finite() && sigma >= 0.0 => DeltaRule::Theoretical { sigma },
            Some(sigma) => return Err(usage(format!("--sigma must be >= 0, got {sigma}"))),
            None => return Err(usage("--delta theory needs --sigma")),
        },
    };
    let x = PointSet::new(io::read_points(&a.input)?)?;
    let cfg = DenoiseConfig {
        n_min: a.n_min,
        delta,
    };
    let res = run_algorithm(a.algorithm, &x, a.k, &cfg)?;
    let text = match a.format {
        Format::Json => io::to_json(&HuntOutput::new(&res, a.seed)),
        Format::Csv => io::matrix_csv(a.seed, &res.vertices.transpose()),
    };
    io::write_text(a.output.as_deref(), &text)
}

fn thread_cap() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))),
        Err(_) => Ok(0),
    }
}

/// Long-format table: one row per (sweep value, algorithm) cell.
pub fn experiment_csv(res: &ExperimentResult) -> String {
    let header: Vec<String> = [
        "sweep_param",
        "sweep_value",
        "algorithm",
        "mean_error",
        "sd_error",
        "n_success",
        "n_reps",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
    let rows: Vec<Vec<String>> = res
        .cells
        .iter()
        .map(|c| {
            vec![
                res.spec.sweep_param.to_string(),
                fmt_real(c.sweep_value),
                c.algorithm.tag().to_string(),
                opt(c.mean_error),
                opt(c.sd_error),
                c.n_success.to_string(),
                c.n_reps.to_string(),
            ]
        })
        .collect();
    io::csv_table(res.spec.seed, &header, &rows)
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let mut spec = match (a.preset, &a.spec) {
        (Some(p), _) => ExperimentSpec::preset(p, 20, 0)?,
        (None, Some(path)) => io::parse_json(&io::read_text(path)?, &path.display().to_string())?,
        (None, None) => return Err(usage("pass --preset or --spec")),
    };
    if let Some(reps) = a.reps {
        spec.reps = reps as usize;
    }
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    spec.validate().map_err(|e| usage(e.to_string()))?;

    let threads = thread_cap()?;
    let result = if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| usage(e.to_string()))?
            .install(|| run_experiment(&spec))?
    } else {
        run_experiment(&spec)?
    };
    let text = match a.format {
        Format::Csv => experiment_csv(&result),
        Format::Json => io::to_json(&result),
    };
    io::write_text(a.output.as_deref(), &text)
}

pub fn bounds(a: &BoundsArgs) -> Result<(), CliError> {
    if !(a.c_star.is_finite() && a.c_star > 0.0) {
        return Err(usage(format!("--c-star must be positive, got {}", a.c_star)));
    }
    let s = Simplex::new(io::read_points(&a.vertices)?.transpose())?;

    let translation = match &a.sweep_translate {
        Some(offsets) => {
            let direction = match &a.direction {
                Some(v) if v.len() == s.d() => DVector::from_vec(v.clone()),
                Some(v) => {
                    return Err(usage(format!(
                        "--direction has {} entries, the vertices have {}",
                        v.len(),
                        s.d()
                    )))
                }
                None => {
                    let mut e = DVector::zeros(s.d());
                    e[s.d() - 1] = 1.0;
                    e
                }
            };
            Some(translation_sweep(&s, &direction, offsets)?)
        }
        None => None,
    };

    // a translation family may start from a flat base, so only require the
    // base factors when nothing else was asked for
    let factors = match SimplexFactors::of(&s) {
        Ok(f) => Some(f),
        Err(e) if translation.is_none() || a.points.is_some() || a.simulate_n.is_some() => {
            return Err(e.into())
        }
        Err(_) => None,
    };

    let (report, seed) = if let (Some(points), Some(noiseless)) = (&a.points, &a.noiseless) {
        let x = PointSet::new(io::read_points(points)?)?;
        let r = PointSet::new(io::read_points(noiseless)?)?;
        let pure = PureNodeMap::from_noiseless(&r, &s, a.pure_tol)?;
        (Some(bound_report(&x, &s, &r, &pure, a.c_star)?), None)
    } else if let Some(n) = a.simulate_n {
        if !(a.sigma.is_finite() && a.sigma >= 0.0) {
            return Err(usage(format!("--sigma must be >= 0, got {}", a.sigma)));
        }
        let sample = sample_simplex_points(&s, n, a.pure_per_vertex, a.seed)?;
        let x = embed_and_noise(&sample.r, s.d(), a.sigma, a.seed)?;
        (
            Some(bound_report(&x, &s, &sample.r, &sample.pure, a.c_star)?),
            Some(a.seed),
        )
    } else {
        (None, None)
    };

    let out = BoundsOutput {
        factors,
        report,
        translation,
        seed,
    };
    io::write_text(a.output.as_deref(), &io::to_json(&out))
}

pub fn tuning(a: &TuningArgs) -> Result<(), CliError> {
    let regime = match (a.delta_n, a.c0) {
        (_, Some(c0)) => Regime::C0(c0),
        (Some(dn), None) => Regime::DeltaN(dn),
        (None, None) => {
            let ln = (a.n.max(2) as f64).ln();
            Regime::DeltaN((ln.ln() / ln).max(0.0))
        }
    };
    let centered = match (&a.vertices, a.centered_s_km1) {
        (Some(path), _) => Some(Simplex::new(io::read_points(path)?.transpose())?.centered_s_km1()),
        (None, v) => v,
    };
    let t = tuning_constants(a.n, a.k, a.d, a.sigma, regime, centered)?;
    io::write_text(a.output.as_deref(), &io::to_json(&t))
}
