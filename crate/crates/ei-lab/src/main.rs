//! Thin command-line front end over the `ei_lab` library: `simulate`,
//! `estimate`, `asymvar` and `mc-study` subcommands with machine-readable
//! output. All numeric output uses nine significant digits with a `.`
//! decimal separator; data files are one value per line with `#` comments.

use std::io::{Read as _, Write as _};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ei_lab::asymvar::{sliding_gap, variance, Scheme, VarianceRequest};
use ei_lab::blocks::{BlockScheme, SchemeKind, Transform};
use ei_lab::competitors::{threshold_quantile, CompetitorKind};
use ei_lab::estimators::{EstimatorKind, EstimatorSpec};
use ei_lab::fmt::sig9;
use ei_lab::mcstudy::{run_study, StudyConfig};
use ei_lab::sim::{ModelKind, ModelSpec, TimeSeries};
use ei_lab::Error;

#[derive(Parser)]
#[command(
    name = "ei-lab",
    about = "Extremal index estimation: simulation, estimators, asymptotic variances, Monte-Carlo studies",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one of the four benchmark models to single-column CSV.
    Simulate(SimulateArgs),
    /// Estimate the extremal index from a series read from a file or stdin.
    Estimate(EstimateArgs),
    /// Evaluate asymptotic variances of the moment estimators.
    Asymvar(AsymvarArgs),
    /// Run a Monte-Carlo study described by a config file.
    McStudy(McStudyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Model: armax | arch | sqarch | markov
    #[arg(long)]
    model: String,
    /// Model parameter (α, λ or ϑ).
    #[arg(long)]
    param: f64,
    /// Series length.
    #[arg(long)]
    n: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Estimator: cfg | mad | pml | root:<p> | intervals | suveges
    #[arg(long)]
    estimator: String,
    /// Block size b (moment estimators) or the threshold level 1-1/b
    /// (competitors).
    #[arg(long)]
    block_size: usize,
    /// Blocking scheme: disjoint | sliding (moment estimators only).
    #[arg(long, default_value = "sliding")]
    scheme: String,
    /// Transform: z | y (moment estimators only).
    #[arg(long, default_value = "z")]
    transform: String,
    /// Apply the leave-one-block bias reduction.
    #[arg(long, default_value_t = false)]
    bias_reduced: bool,
    /// Clip the estimate to (0, 1].
    #[arg(long, default_value_t = false)]
    clip: bool,
    /// Input file, one value per line, '#' comments (stdin if omitted).
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct AsymvarArgs {
    /// Model: iid | armax
    #[arg(long, default_value = "iid")]
    model: String,
    /// ARMAX parameter α.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// θ for the iid model (the closed forms are exact at θ = 1).
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Estimator: cfg | mad | pml | root[:<p>]
    #[arg(long)]
    estimator: String,
    /// Scheme: disjoint | sliding
    #[arg(long, default_value = "disjoint")]
    scheme: String,
    /// Root parameter p (alternative to root:<p>).
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct McStudyArgs {
    /// Study config file (see README for the grammar).
    #[arg(long)]
    config: String,
    /// Override the config master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the worker-pool size (EI_LAB_THREADS also applies).
    #[arg(long)]
    parallelism: Option<usize>,
    /// Write the CSV to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Write one CSV per model into a directory, plus a run_info.txt
    /// sidecar with run metadata.
    #[arg(long)]
    out_dir: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; usage problems exit with 1
            let _ = write!(std::io::stderr(), "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Asymvar(args) => cmd_asymvar(args),
        Command::McStudy(args) => cmd_mc_study(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Config(_) => 1,
        Error::Convergence { .. } => 2,
        Error::InsufficientData(_) | Error::Degenerate(_) => 3,
    }
}

fn parse_model_kind(s: &str) -> Result<ModelKind, Error> {
    match s {
        "armax" => Ok(ModelKind::Armax),
        "arch" => Ok(ModelKind::Arch),
        "sqarch" => Ok(ModelKind::SqArch),
        "markov" => Ok(ModelKind::MarkovClayton),
        _ => Err(Error::Config(format!("unknown model '{s}'"))),
    }
}

fn parse_scheme(s: &str) -> Result<SchemeKind, Error> {
    match s {
        "disjoint" => Ok(SchemeKind::Disjoint),
        "sliding" => Ok(SchemeKind::Sliding),
        _ => Err(Error::Config(format!("unknown scheme '{s}'"))),
    }
}

fn parse_transform(s: &str) -> Result<Transform, Error> {
    match s {
        "z" => Ok(Transform::Z),
        "y" => Ok(Transform::Y),
        _ => Err(Error::Config(format!("unknown transform '{s}'"))),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let kind = parse_model_kind(&args.model)?;
    let spec = ModelSpec::new(kind, args.param)?;
    let series = spec.simulate(args.n, args.seed)?;
    let mut out = String::with_capacity(series.len() * 20 + 64);
    out.push_str(&format!(
        "# model={} param={} n={} seed={}\n",
        kind.name(),
        sig9(args.param),
        args.n,
        args.seed
    ));
    for v in series.values() {
        out.push_str(&sig9(*v));
        out.push('\n');
    }
    write_output(args.out.as_deref(), &out)
}

fn read_series(input: Option<&str>) -> Result<TimeSeries, Error> {
    let text = match input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read '{path}': {e}")))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Config(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::Config(format!("line {}: invalid value '{line}'", lineno + 1))
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::InsufficientData("no input values".into()));
    }
    TimeSeries::new(values)
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), Error> {
    if args.block_size < 1 {
        return Err(Error::Config("block size must be >= 1".into()));
    }
    let series = read_series(args.input.as_deref())?;
    let estimate = if let Ok(kind) = CompetitorKind::parse(&args.estimator) {
        let u = threshold_quantile(&series, args.block_size)?;
        kind.estimate(&series, u)?
    } else {
        let spec = EstimatorSpec::parse(&args.estimator)?.with_clip(args.clip);
        let scheme = BlockScheme {
            kind: parse_scheme(&args.scheme)?,
            block_size: args.block_size,
        };
        let transform = parse_transform(&args.transform)?;
        ei_lab::estimators::estimate_pipeline(
            &series,
            scheme,
            transform,
            args.bias_reduced,
            &spec,
        )?
    };
    println!("{}", sig9(estimate));
    Ok(())
}

fn cmd_asymvar(args: AsymvarArgs) -> Result<(), Error> {
    let model = match args.model.as_str() {
        "iid" => ei_lab::asymvar::iid_model(args.theta)?,
        "armax" => ei_lab::asymvar::armax_model(args.alpha)?,
        other => return Err(Error::Config(format!("unknown model '{other}'"))),
    };
    let method = match (args.estimator.as_str(), args.p) {
        ("root", Some(p)) => EstimatorKind::Root(p),
        ("root", None) => {
            return Err(Error::Config("estimator 'root' needs --p or root:<p>".into()))
        }
        (s, _) => EstimatorSpec::parse(s)?.kind,
    };
    let scheme = match parse_scheme(&args.scheme)? {
        SchemeKind::Disjoint => Scheme::Disjoint,
        SchemeKind::Sliding => Scheme::Sliding,
    };
    let var = variance(&VarianceRequest { method, scheme, model: &model })?;
    let theta = model.theta();
    let gap = sliding_gap(method, theta)?;
    println!("variance {}", sig9(var));
    println!("variance_over_theta2 {}", sig9(var / (theta * theta)));
    println!("gap {}", sig9(gap));
    Ok(())
}

fn cmd_mc_study(args: McStudyArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read '{}': {e}", args.config)))?;
    let mut cfg = StudyConfig::parse(&text)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(par) = args.parallelism {
        cfg.parallelism = par;
    } else if let Ok(v) = std::env::var("EI_LAB_THREADS") {
        cfg.parallelism = v
            .parse()
            .map_err(|_| Error::Config(format!("invalid EI_LAB_THREADS value '{v}'")))?;
    }
    let result = run_study(&cfg)?;

    if let Some(dir) = args.out_dir.as_deref() {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Config(format!("cannot create '{dir}': {e}")))?;
        for model in &cfg.models {
            let name = format!(
                "{}/model_{}_{}.csv",
                dir,
                model.spec.kind.name(),
                model.spec.param
            );
            let per_model = ei_lab::mcstudy::StudyResult {
                rows: result
                    .rows
                    .iter()
                    .filter(|r| {
                        r.model == model.spec.kind.name() && r.param == model.spec.param
                    })
                    .cloned()
                    .collect(),
            };
            std::fs::write(&name, per_model.to_csv())
                .map_err(|e| Error::Config(format!("cannot write '{name}': {e}")))?;
        }
        let info = format!(
            "config: {}\nmaster_seed: {}\nreplications: {}\nparallelism: {}\n\
             pairing: all estimator/block-size combinations within a replication \
             share the same simulated path\n",
            args.config, cfg.master_seed, cfg.replications, cfg.parallelism
        );
        let name = format!("{dir}/run_info.txt");
        std::fs::write(&name, info)
            .map_err(|e| Error::Config(format!("cannot write '{name}': {e}")))?;
        Ok(())
    } else {
        write_output(args.out.as_deref(), &result.to_csv())
    }
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Config(format!("cannot write '{p}': {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
