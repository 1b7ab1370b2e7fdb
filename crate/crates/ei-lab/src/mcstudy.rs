//! Monte-Carlo benchmarking of the estimators: run N seeded replications
//! per model, evaluate every estimator/block-size combination on the same
//! simulated path, and aggregate bias/variance/MSE per row.
//!
//! The per-replication seed is derived deterministically from
//! (master seed, model index, replication index), and replication results
//! are reduced in replication order, so the output is byte-identical for
//! any level of parallelism. Sharing paths across estimators and block
//! sizes pairs the comparisons and reduces comparison noise; the sharing is
//! recorded in the run metadata.
//!
//! Aggregation conventions: `variance` uses the 1/N normalization so that
//! `mse = bias² + variance` holds as an exact identity.
//!
//! # Config file grammar
//!
//! One directive per line, `#` starts a comment, `=` after the key is
//! optional. Keys:
//!
//! ```text
//! n 8192                  # series length
//! replications 500        # N
//! seed 42                 # master seed
//! parallelism 4           # worker threads (0 = all cores)
//! block_sizes 32 64 128   # whitespace- or comma-separated
//! model armax 0.25        # theta_true = 1 - alpha implied
//! model arch 0.5 theta 0.835     # other models need an explicit theta
//! estimator cfg sliding z br     # moment estimator: spec scheme transform br|raw
//! estimator root:2               # defaults: sliding z br
//! estimator intervals            # competitors take no scheme/transform
//! ```

use rayon::prelude::*;

use crate::blocks::{pseudo_sample_with_cdf, BlockScheme, EmpiricalCdf, SchemeKind, Transform};
use crate::competitors::{threshold_quantile, CompetitorKind};
use crate::estimators::EstimatorSpec;
use crate::fmt::sig9;
use crate::sim::{derive_seed, ModelKind, ModelSpec};
use crate::{Error, Result};

/// A model to simulate together with the target value of θ used for bias
/// and MSE (analytic for ARMAX, a reference value for the other models).
#[derive(Debug, Clone, Copy)]
pub struct StudyModel {
    pub spec: ModelSpec,
    pub theta_true: f64,
}

impl StudyModel {
    pub fn new(spec: ModelSpec, theta_true: f64) -> Result<Self> {
        if !(theta_true > 0.0 && theta_true <= 1.0) {
            return Err(Error::Config(format!(
                "theta_true must lie in (0, 1], got {theta_true}"
            )));
        }
        Ok(Self { spec, theta_true })
    }
}

/// One estimator column of the study.
#[derive(Debug, Clone, Copy)]
pub enum StudyEstimator {
    Moment {
        spec: EstimatorSpec,
        scheme: SchemeKind,
        transform: Transform,
        bias_reduced: bool,
    },
    Competitor(CompetitorKind),
}

impl StudyEstimator {
    fn label(&self) -> String {
        match self {
            StudyEstimator::Moment { spec, .. } => spec.label(),
            StudyEstimator::Competitor(kind) => kind.name().into(),
        }
    }

    fn scheme_label(&self) -> String {
        match self {
            StudyEstimator::Moment { scheme, .. } => scheme.name().into(),
            StudyEstimator::Competitor(_) => "-".into(),
        }
    }

    fn transform_label(&self) -> String {
        match self {
            StudyEstimator::Moment { transform, bias_reduced, .. } => {
                format!("{}{}", transform.name(), if *bias_reduced { "" } else { "-raw" })
            }
            StudyEstimator::Competitor(_) => "-".into(),
        }
    }
}

/// Full study description.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub models: Vec<StudyModel>,
    pub n: usize,
    pub block_sizes: Vec<usize>,
    pub estimators: Vec<StudyEstimator>,
    pub replications: usize,
    pub master_seed: u64,
    /// Worker threads; 0 means one per available core.
    pub parallelism: usize,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("study needs at least one model".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("study needs at least one estimator".into()));
        }
        if self.block_sizes.is_empty() {
            return Err(Error::Config("study needs at least one block size".into()));
        }
        if self.replications < 2 {
            return Err(Error::Config("study needs at least two replications".into()));
        }
        if self.n < 1 {
            return Err(Error::Config("series length must be positive".into()));
        }
        for &b in &self.block_sizes {
            if b < 1 || b > self.n {
                return Err(Error::Config(format!(
                    "block size {b} out of range for n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Parse the key-value config grammar described in the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut models = Vec::new();
        let mut n = None;
        let mut block_sizes = Vec::new();
        let mut estimators = Vec::new();
        let mut replications = None;
        let mut master_seed = 0u64;
        let mut parallelism = 0usize;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',' || c == '=')
                .filter(|t| !t.is_empty())
                .collect();
            let err = |msg: String| Error::Config(format!("line {}: {msg}", lineno + 1));
            match tokens[0] {
                "n" => n = Some(parse_num::<usize>(&tokens, 1).map_err(err)?),
                "replications" => {
                    replications = Some(parse_num::<usize>(&tokens, 1).map_err(err)?)
                }
                "seed" => master_seed = parse_num::<u64>(&tokens, 1).map_err(err)?,
                "parallelism" => parallelism = parse_num::<usize>(&tokens, 1).map_err(err)?,
                "block_sizes" => {
                    for t in &tokens[1..] {
                        block_sizes.push(
                            t.parse::<usize>()
                                .map_err(|_| err(format!("invalid block size '{t}'")))?,
                        );
                    }
                }
                "model" => models.push(parse_model(&tokens[1..]).map_err(err)?),
                "estimator" => estimators.push(parse_estimator(&tokens[1..]).map_err(err)?),
                other => return Err(err(format!("unknown directive '{other}'"))),
            }
        }

        let cfg = StudyConfig {
            models,
            n: n.ok_or_else(|| Error::Config("missing 'n' directive".into()))?,
            block_sizes,
            estimators,
            replications: replications
                .ok_or_else(|| Error::Config("missing 'replications' directive".into()))?,
            master_seed,
            parallelism,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_num<T: std::str::FromStr>(tokens: &[&str], idx: usize) -> std::result::Result<T, String> {
    tokens
        .get(idx)
        .ok_or_else(|| "missing value".to_string())?
        .parse::<T>()
        .map_err(|_| format!("invalid value '{}'", tokens[idx]))
}

fn parse_model(args: &[&str]) -> std::result::Result<StudyModel, String> {
    if args.is_empty() {
        return Err("model needs a kind".into());
    }
    let kind = match args[0] {
        "armax" => ModelKind::Armax,
        "arch" => ModelKind::Arch,
        "sqarch" => ModelKind::SqArch,
        "markov" => ModelKind::MarkovClayton,
        other => return Err(format!("unknown model '{other}'")),
    };
    let param: f64 = args
        .get(1)
        .ok_or_else(|| "model needs a parameter".to_string())?
        .parse()
        .map_err(|_| format!("invalid model parameter '{}'", args[1]))?;
    let spec = ModelSpec::new(kind, param).map_err(|e| e.to_string())?;
    let theta = match args.get(2) {
        Some(&"theta") => Some(
            args.get(3)
                .ok_or_else(|| "theta needs a value".to_string())?
                .parse::<f64>()
                .map_err(|_| "invalid theta value".to_string())?,
        ),
        Some(other) => return Err(format!("unexpected token '{other}'")),
        None => None,
    };
    let theta = match (theta, kind) {
        (Some(t), _) => t,
        (None, ModelKind::Armax) => 1.0 - param,
        (None, _) => return Err(format!("model {} needs an explicit theta", kind.name())),
    };
    StudyModel::new(spec, theta).map_err(|e| e.to_string())
}

fn parse_estimator(args: &[&str]) -> std::result::Result<StudyEstimator, String> {
    if args.is_empty() {
        return Err("estimator needs a name".into());
    }
    if let Ok(kind) = CompetitorKind::parse(args[0]) {
        if args.len() > 1 {
            return Err(format!("competitor '{}' takes no options", args[0]));
        }
        return Ok(StudyEstimator::Competitor(kind));
    }
    let spec = EstimatorSpec::parse(args[0]).map_err(|e| e.to_string())?;
    let mut scheme = SchemeKind::Sliding;
    let mut transform = Transform::Z;
    let mut bias_reduced = true;
    for t in &args[1..] {
        match *t {
            "sliding" => scheme = SchemeKind::Sliding,
            "disjoint" => scheme = SchemeKind::Disjoint,
            "z" => transform = Transform::Z,
            "y" => transform = Transform::Y,
            "br" => bias_reduced = true,
            "raw" => bias_reduced = false,
            other => return Err(format!("unknown estimator option '{other}'")),
        }
    }
    Ok(StudyEstimator::Moment { spec, scheme, transform, bias_reduced })
}

/// One aggregated row of a study result.
#[derive(Debug, Clone)]
pub struct StudyRow {
    pub model: String,
    pub param: f64,
    pub theta_true: f64,
    pub estimator: String,
    pub scheme: String,
    pub transform: String,
    pub block_size: usize,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub replications: usize,
    pub failures: usize,
    pub flagged: bool,
}

/// Aggregated study output.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
}

impl StudyResult {
    /// Render as CSV, one header row, stable formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model,param,theta_true,estimator,scheme,transform,b,mean,bias,variance,mse,mse_x1e3,replications,failures,flagged\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.model,
                sig9(r.param),
                sig9(r.theta_true),
                r.estimator,
                r.scheme,
                r.transform,
                r.block_size,
                sig9(r.mean),
                sig9(r.bias),
                sig9(r.variance),
                sig9(r.mse),
                sig9(r.mse * 1e3),
                r.replications,
                r.failures,
                r.flagged,
            ));
        }
        out
    }
}

/// Mean, bias, variance (1/N) and MSE of a batch of estimates.
///
/// With these conventions `mse = bias² + variance` exactly.
pub fn aggregate(estimates: &[f64], theta_true: f64) -> Result<(f64, f64, f64, f64)> {
    if estimates.len() < 2 {
        return Err(Error::InsufficientData(
            "aggregation needs at least two estimates".into(),
        ));
    }
    if estimates.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain("non-finite estimate in aggregation".into()));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let bias = mean - theta_true;
    let variance = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
    let mse = estimates.iter().map(|e| (e - theta_true) * (e - theta_true)).sum::<f64>() / n;
    Ok((mean, bias, variance, mse))
}

/// Distinct pseudo-sample configurations needed by the moment estimators.
fn sample_configs(estimators: &[StudyEstimator]) -> Vec<(SchemeKind, Transform, bool)> {
    let mut configs = Vec::new();
    for e in estimators {
        if let StudyEstimator::Moment { scheme, transform, bias_reduced, .. } = e {
            let c = (*scheme, *transform, *bias_reduced);
            if !configs.contains(&c) {
                configs.push(c);
            }
        }
    }
    configs
}

/// Run the full study. Every estimator/block-size combination within a
/// replication is evaluated on the same simulated path.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;

    let configs = sample_configs(&cfg.estimators);
    let rows_per_model = cfg.estimators.len() * cfg.block_sizes.len();
    let mut rows = Vec::with_capacity(cfg.models.len() * rows_per_model);

    for (mi, model) in cfg.models.iter().enumerate() {
        // ordered collection keyed by replication index keeps the reduction
        // independent of scheduling
        let per_rep: Vec<Vec<Option<f64>>> = pool.install(|| {
            (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let seed = derive_seed(cfg.master_seed, mi as u64, r as u64);
                    replicate(cfg, model, seed, &configs)
                })
                .collect()
        });

        for (ei, est) in cfg.estimators.iter().enumerate() {
            for (bi, &b) in cfg.block_sizes.iter().enumerate() {
                let idx = ei * cfg.block_sizes.len() + bi;
                let estimates: Vec<f64> =
                    per_rep.iter().filter_map(|rep| rep[idx]).collect();
                let failures = cfg.replications - estimates.len();
                let flagged = failures * 100 > cfg.replications;
                let (mean, bias, variance, mse) = aggregate(&estimates, model.theta_true)
                    .unwrap_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN));
                rows.push(StudyRow {
                    model: model.spec.kind.name().into(),
                    param: model.spec.param,
                    theta_true: model.theta_true,
                    estimator: est.label(),
                    scheme: est.scheme_label(),
                    transform: est.transform_label(),
                    block_size: b,
                    mean,
                    bias,
                    variance,
                    mse,
                    replications: cfg.replications,
                    failures,
                    flagged: flagged || estimates.len() < 2,
                });
            }
        }
    }
    Ok(StudyResult { rows })
}

/// Evaluate all estimator × block-size combinations on one simulated path.
/// Returns estimates indexed by `ei * n_blocks + bi`; failures become None.
fn replicate(
    cfg: &StudyConfig,
    model: &StudyModel,
    seed: u64,
    configs: &[(SchemeKind, Transform, bool)],
) -> Vec<Option<f64>> {
    let mut out = vec![None; cfg.estimators.len() * cfg.block_sizes.len()];
    let Ok(path) = model.spec.simulate(cfg.n, seed) else {
        return out;
    };
    let cdf = EmpiricalCdf::new(&path);
    for (bi, &b) in cfg.block_sizes.iter().enumerate() {
        // shared pseudo-samples for the moment estimators
        let mut samples = Vec::with_capacity(configs.len());
        for &(scheme_kind, transform, bias_reduced) in configs {
            let scheme = BlockScheme { kind: scheme_kind, block_size: b };
            samples.push(
                pseudo_sample_with_cdf(&path, &cdf, scheme, transform, bias_reduced).ok(),
            );
        }
        let threshold = threshold_quantile(&path, b).ok();
        for (ei, est) in cfg.estimators.iter().enumerate() {
            let idx = ei * cfg.block_sizes.len() + bi;
            out[idx] = match est {
                StudyEstimator::Moment { spec, scheme, transform, bias_reduced } => {
                    let ci = configs
                        .iter()
                        .position(|c| c == &(*scheme, *transform, *bias_reduced))
                        .expect("config registered");
                    samples[ci]
                        .as_ref()
                        .and_then(|s| spec.estimate(s.values()).ok())
                }
                StudyEstimator::Competitor(kind) => {
                    threshold.and_then(|u| kind.estimate(&path, u).ok())
                }
            };
        }
    }
    out
}
