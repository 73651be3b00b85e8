//! Command-line front end for `empsup`.
//!
//! Exit codes: `0` success or passing check, `1` failed statistical check,
//! `2` usage or validation error.

pub mod manifest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use empsup::formats::{self, FormatError};
use empsup::harness::{self, AlphaRule, ExperimentConfig, HarnessError};
use empsup::limits::{density_tw, DensitySpec, LimitError};
use empsup::process::{sup_unweighted, sup_weighted, ProcessError, Sample};

use manifest::{DensityConfig, ResolvedConfig, RunManifest, TableConfig, VerifyConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Result of a successful command invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailed => 1,
        }
    }
}

pub const USAGE_EXIT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "empsup",
    version,
    about = "Suprema and maximizers of the standardized uniform empirical process"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Supremum and maximizer of one sample (newline-delimited floats).
    Sup(SupArgs),
    /// Monte Carlo replications written as CSV plus a manifest.
    Experiment(ExperimentArgs),
    /// Monte Carlo check of the maximal inequality.
    Verify(VerifyArgs),
    /// Joint density of (argmax |B|, max |B|) on a grid.
    Density(DensityArgs),
    /// Convergence diagnostics table.
    Table(TableArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct SupArgs {
    /// File with one value in (0,1) per line.
    pub input: Option<PathBuf>,
    /// Inline comma-separated values instead of a file.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<f64>,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub weighted: bool,
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (0 = all cores). Output bytes do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args, Clone)]
pub struct ExperimentFlags {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `loglog` or a fixed value in (0, 1/2).
    #[arg(long)]
    pub alpha: Option<AlphaRule>,
    #[arg(long, action = clap::ArgAction::Set)]
    pub weighted: Option<bool>,
    #[arg(long, action = clap::ArgAction::Set)]
    pub normalize: Option<bool>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub flags: ExperimentFlags,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Also write the report and a manifest into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// `<nx>x<ny>` grid.
    #[arg(long, default_value = "101x101", value_parser = parse_grid)]
    pub grid: (usize, usize),
    #[arg(long = "trunc-j", default_value_t = 50)]
    pub trunc_j: usize,
    #[arg(long = "term-tol", default_value_t = 1e-15)]
    pub term_tol: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub ymax: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub flags: ExperimentFlags,
    /// Bin edges for the independence diagnostic (default: Gumbel deciles).
    #[arg(long = "y-edges", value_delimiter = ',', allow_negative_numbers = true)]
    pub y_edges: Vec<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected <int>x<int>, got `{s}`"))?;
    let nx = a
        .trim()
        .parse()
        .map_err(|_| format!("bad grid width `{a}`"))?;
    let ny = b
        .trim()
        .parse()
        .map_err(|_| format!("bad grid height `{b}`"))?;
    Ok((nx, ny))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339()
}

#[derive(Debug, Serialize)]
struct SupReport {
    n: usize,
    value: f64,
    location: f64,
    index: usize,
    side: &'static str,
}

pub fn cmd_sup(args: &SupArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let values = match (&args.input, args.values.is_empty()) {
        (Some(path), true) => formats::parse_sample_text(&read_file(path)?)?,
        (None, false) => args.values.clone(),
        (Some(_), false) => {
            return Err(CliError::Usage(
                "give either an input file or --values, not both".into(),
            ))
        }
        (None, true) => return Err(CliError::Usage("no input file or --values given".into())),
    };
    let sample = Sample::new(values)?;
    let r = if args.weighted {
        sup_weighted(&sample)
    } else {
        sup_unweighted(&sample)
    };
    let report = SupReport {
        n: sample.n(),
        value: r.value,
        location: r.location,
        index: r.index,
        side: r.side.as_str(),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&report).expect("report serializes")
    )
    .map_err(stdout_err)?;
    Ok(Outcome::Success)
}

fn resolve_experiment(flags: &ExperimentFlags) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => serde_json::from_str::<ExperimentConfig>(&read_file(path)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => ExperimentConfig {
            n_values: vec![100],
            replications: 1000,
            master_seed: 0,
            alpha_rule: AlphaRule::LogLog,
            weighted: true,
            normalize: true,
        },
    };
    if !flags.n.is_empty() {
        cfg.n_values = flags.n.clone();
    }
    if let Some(r) = flags.reps {
        cfg.replications = r;
    }
    if let Some(s) = flags.seed {
        cfg.master_seed = s;
    }
    if let Some(a) = flags.alpha {
        cfg.alpha_rule = a;
    }
    if let Some(w) = flags.weighted {
        cfg.weighted = w;
    }
    if let Some(z) = flags.normalize {
        cfg.normalize = z;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs a resolved configuration, writes its outputs and manifest into `dir`.
pub fn execute(
    config: &ResolvedConfig,
    run: &RunArgs,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let started_at = now();
    let dir = &run.out;
    let command = config.command();
    let mut outputs = Vec::new();
    let mut outcome = Outcome::Success;

    match config {
        ResolvedConfig::Experiment(cfg) => {
            let records = harness::run_experiment(cfg, run.workers)?;
            let mut buf = Vec::new();
            formats::write_records_csv(&mut buf, &records)?;
            let path = dir.join("experiment.csv");
            write_file(&path, &buf)?;
            outputs.push(path);
        }
        ResolvedConfig::Verify(cfg) => {
            let report = harness::verify_lemma1(
                cfg.n,
                cfg.a,
                cfg.lambda,
                cfg.replications,
                cfg.master_seed,
                run.workers,
            )?;
            let json = serde_json::to_string(&report).expect("report serializes");
            writeln!(out, "{json}").map_err(stdout_err)?;
            let path = dir.join("verify.json");
            write_file(&path, format!("{json}\n").as_bytes())?;
            outputs.push(path);
            if !report.pass {
                outcome = Outcome::CheckFailed;
            }
        }
        ResolvedConfig::Density(cfg) => {
            let rows = density_grid(cfg)?;
            let mut buf = Vec::new();
            formats::write_density_csv(&mut buf, &rows)?;
            let path = dir.join("density.csv");
            write_file(&path, &buf)?;
            outputs.push(path);
        }
        ResolvedConfig::Table(cfg) => {
            let rows = harness::convergence_table(&cfg.experiment, &cfg.y_edges, run.workers)?;
            let mut buf = Vec::new();
            formats::write_table_csv(&mut buf, &rows)?;
            let path = dir.join("table.csv");
            write_file(&path, &buf)?;
            outputs.push(path);
        }
    }

    let manifest = RunManifest {
        command: command.into(),
        config: config.to_value(),
        master_seed: config.master_seed(),
        version: env!("CARGO_PKG_VERSION").into(),
        workers: run.workers,
        started_at,
        finished_at: now(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let manifest_path = dir.join(format!("{command}.manifest.json"));
    write_file(&manifest_path, manifest.to_json().as_bytes())?;
    if config.command() != "verify" {
        for p in &outputs {
            writeln!(out, "{}", p.display()).map_err(stdout_err)?;
        }
    }
    Ok(outcome)
}

/// `x` runs over cell midpoints, mirrored so that the grid is closed under
/// `x ↦ 1 − x`; `y` runs over `[0, y_max]` including both ends. Rows are
/// ordered by `x`, then `y`.
pub fn density_grid(cfg: &DensityConfig) -> Result<Vec<(f64, f64, f64)>, CliError> {
    let (nx, ny) = (cfg.nodes_x, cfg.nodes_y);
    if nx < 2 || ny < 2 {
        return Err(CliError::Usage(format!(
            "grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    if !(cfg.y_max > 0.0 && cfg.y_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "ymax must be positive, got {}",
            cfg.y_max
        )));
    }
    cfg.spec.validate()?;
    let half = nx.div_ceil(2);
    let mut xs: Vec<f64> = (0..half).map(|i| (i as f64 + 0.5) / nx as f64).collect();
    for i in half..nx {
        xs.push(1.0 - xs[nx - 1 - i]);
    }
    let mut rows = Vec::with_capacity(nx * ny);
    for &x in &xs {
        for j in 0..ny {
            let y = if j == ny - 1 {
                cfg.y_max
            } else {
                cfg.y_max * j as f64 / (ny - 1) as f64
            };
            rows.push((x, y, density_tw(x, y, &cfg.spec)?));
        }
    }
    Ok(rows)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Sup(args) => cmd_sup(&args, out),
        Command::Experiment(args) => {
            let cfg = resolve_experiment(&args.flags)?;
            execute(&ResolvedConfig::Experiment(cfg), &args.run, out)
        }
        Command::Verify(args) => {
            let cfg = VerifyConfig {
                n: args.n,
                a: args.a,
                lambda: args.lambda,
                replications: args.reps,
                master_seed: args.seed,
            };
            empsup::limits::lemma1_bound(cfg.n, cfg.a, cfg.lambda)?;
            if cfg.replications == 0 {
                return Err(CliError::Usage("--reps must be >= 1".into()));
            }
            match &args.out {
                Some(dir) => execute(
                    &ResolvedConfig::Verify(cfg),
                    &RunArgs {
                        out: dir.clone(),
                        workers: args.workers,
                    },
                    out,
                ),
                None => {
                    let r = harness::verify_lemma1(
                        cfg.n,
                        cfg.a,
                        cfg.lambda,
                        cfg.replications,
                        cfg.master_seed,
                        args.workers,
                    )?;
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&r).expect("report serializes")
                    )
                    .map_err(stdout_err)?;
                    Ok(if r.pass {
                        Outcome::Success
                    } else {
                        Outcome::CheckFailed
                    })
                }
            }
        }
        Command::Density(args) => {
            let cfg = DensityConfig {
                nodes_x: args.grid.0,
                nodes_y: args.grid.1,
                y_max: args.ymax,
                spec: DensitySpec {
                    truncation_j: args.trunc_j,
                    term_tolerance: args.term_tol,
                },
            };
            execute(&ResolvedConfig::Density(cfg), &args.run, out)
        }
        Command::Table(args) => {
            let experiment = resolve_experiment(&args.flags)?;
            let y_edges = if args.y_edges.is_empty() {
                harness::default_y_edges()
            } else {
                args.y_edges.clone()
            };
            execute(
                &ResolvedConfig::Table(TableConfig {
                    experiment,
                    y_edges,
                }),
                &args.run,
                out,
            )
        }
        Command::Replay(args) => {
            let manifest = RunManifest::from_json(&read_file(&args.manifest)?)?;
            execute(&manifest.resolved()?, &args.run, out)
        }
    }
}
