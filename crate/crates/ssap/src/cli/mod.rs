//! Subcommand implementations behind the `ssap` binary.
//!
//! Everything here is plain-function logic over parsed arguments so the
//! integration tests can drive the commands without spawning a process.
//! Machine-readable outputs are JSON (embedding a [`RunManifest`]) and CSV;
//! stdout carries a short human summary.
//!
//! Exit-code contract (mapped in `main`): 0 success, 1 usage or config
//! error, 2 runtime error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::distributions::{
    fit_cmp, CmpPrior, DistError, EmpiricalPrior, PoissonPrior, Prior, UniformPrior,
};
use crate::frontier::{rewards_along_path, PathTrace, RewardSequence, VoxelGrid};
use crate::policies::{oracle, reward_of, PolicyKind, PolicySpec};
use crate::sim::{run_experiment, ExperimentConfig, WorldConfig};
use crate::thresholds::compute_thresholds;

/// Errors split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config files, or input data: exit 1.
    Usage(String),
    /// Failure while executing a valid request: exit 2.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Provenance block embedded in every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    /// Present only when the caller supplies `--timestamp`; default runs
    /// stay byte-identical across invocations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            config: None,
            seed: None,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: None,
        }
    }

    pub fn with_config(mut self, path: Option<&Path>) -> Self {
        self.config = path.map(|p| p.display().to_string());
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_outputs(mut self, outputs: &[Option<&PathBuf>]) -> Self {
        self.outputs = outputs
            .iter()
            .flatten()
            .map(|p| p.display().to_string())
            .collect();
        self
    }

    pub fn with_timestamp(mut self, ts: Option<String>) -> Self {
        self.timestamp = ts;
        self
    }
}

/// Parse a prior spec string: `poisson:L`, `cmp:L:N`, `uniform:A:B`, or
/// `hist:PATH`.
pub fn parse_prior_spec(spec: &str) -> Result<Arc<dyn Prior>, CliError> {
    let mut parts = spec.splitn(2, ':');
    let kind = parts.next().unwrap_or_default();
    let rest = parts.next().unwrap_or_default();
    let parse_f64 = |s: &str, what: &str| -> Result<f64, CliError> {
        s.parse()
            .map_err(|e| usage(format!("prior spec '{spec}': bad {what}: {e}")))
    };
    match kind {
        "poisson" => {
            let lambda = parse_f64(rest, "lambda")?;
            Ok(Arc::new(PoissonPrior::new(lambda).map_err(usage)?))
        }
        "cmp" => {
            let mut args = rest.splitn(2, ':');
            let lambda = parse_f64(args.next().unwrap_or_default(), "lambda")?;
            let nu = parse_f64(args.next().unwrap_or_default(), "nu")?;
            Ok(Arc::new(CmpPrior::new(lambda, nu).map_err(usage)?))
        }
        "uniform" => {
            let mut args = rest.splitn(2, ':');
            let lo = parse_f64(args.next().unwrap_or_default(), "lo")?;
            let hi = parse_f64(args.next().unwrap_or_default(), "hi")?;
            Ok(Arc::new(UniformPrior::new(lo, hi).map_err(usage)?))
        }
        "hist" => {
            if rest.is_empty() {
                return Err(usage(format!("prior spec '{spec}': missing histogram path")));
            }
            Ok(Arc::new(EmpiricalPrior::load(Path::new(rest)).map_err(usage)?))
        }
        other => Err(usage(format!(
            "unknown prior kind '{other}' (expected poisson:L, cmp:L:N, uniform:A:B, hist:PATH)"
        ))),
    }
}

/// Parse a `lo:hi:step` grid spec into explicit values (inclusive end).
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid spec '{spec}': expected lo:hi:step")));
    }
    let get = |i: usize| -> Result<f64, CliError> {
        parts[i]
            .parse()
            .map_err(|e| usage(format!("grid spec '{spec}': {e}")))
    };
    let (lo, hi, step) = (get(0)?, get(1)?, get(2)?);
    if step <= 0.0 || step.is_nan() || lo > hi {
        return Err(usage(format!("grid spec '{spec}': need lo <= hi and step > 0")));
    }
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let v = lo + step * k as f64;
        if v > hi + step * 1e-9 {
            break;
        }
        values.push(v);
        k += 1;
    }
    Ok(values)
}

fn write_or_stdout(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| runtime(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub struct ThresholdsArgs {
    pub prior: String,
    pub stages: usize,
    pub robots: usize,
    pub out: Option<PathBuf>,
}

pub fn cmd_thresholds(args: &ThresholdsArgs) -> Result<(), CliError> {
    let prior = parse_prior_spec(&args.prior)?;
    let table = compute_thresholds(prior.as_ref(), args.stages, args.robots).map_err(usage)?;
    let csv = table.to_csv_string();
    write_or_stdout(args.out.as_ref(), &csv)?;
    if let Some(path) = &args.out {
        println!(
            "wrote {} threshold cells for {} stages, {} robots to {}",
            csv.lines().count() - 1,
            args.stages,
            args.robots,
            path.display()
        );
    }
    Ok(())
}

/// JSON schema of `simulate --config`; flags override file values.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFileConfig {
    pub prior: Option<String>,
    pub stages: Option<usize>,
    pub robots: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub policies: Option<Vec<String>>,
    pub world: Option<WorldFileConfig>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldFileConfig {
    pub mode: String,
    pub intensity: Option<f64>,
    pub sensing_radius: Option<f64>,
    pub spacing: Option<f64>,
}

#[derive(Debug, Default)]
pub struct SimulateArgs {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub stages: Option<usize>,
    pub robots: Option<usize>,
    pub lambda: Option<f64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub timestamp: Option<String>,
}

pub const DEFAULT_LAMBDA: f64 = 5.0;
pub const DEFAULT_STAGES: usize = 60;
pub const DEFAULT_ROBOTS: usize = 3;
pub const DEFAULT_TRIALS: usize = 150;
pub const DEFAULT_SEED: u64 = 7;

#[derive(Serialize)]
struct SimulateReportFile<'a> {
    manifest: &'a RunManifest,
    report: &'a crate::sim::ExperimentReport,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let file: SimulateFileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("config {}: {e}", path.display())))?
        }
        None => SimulateFileConfig::default(),
    };

    let stages = args.stages.or(file.stages).unwrap_or(DEFAULT_STAGES);
    let robots = args.robots.or(file.robots).unwrap_or(DEFAULT_ROBOTS);
    let trials = args.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);

    // --lambda forces a Poisson prior; otherwise take the config's prior.
    let prior: Arc<dyn Prior> = match (args.lambda, &file.prior) {
        (Some(lambda), _) => Arc::new(PoissonPrior::new(lambda).map_err(usage)?),
        (None, Some(spec)) => parse_prior_spec(spec)?,
        (None, None) => Arc::new(PoissonPrior::new(DEFAULT_LAMBDA).map_err(usage)?),
    };

    let world = match &file.world {
        None => WorldConfig::iid(stages),
        Some(w) if w.mode == "iid" => WorldConfig::iid(stages),
        Some(w) if w.mode == "spatial" => {
            let missing = |what: &str| usage(format!("spatial world config missing '{what}'"));
            WorldConfig::spatial(
                w.intensity.ok_or_else(|| missing("intensity"))?,
                w.sensing_radius.ok_or_else(|| missing("sensing_radius"))?,
                stages,
                w.spacing.ok_or_else(|| missing("spacing"))?,
            )
        }
        Some(w) => return Err(usage(format!("unknown world mode '{}'", w.mode))),
    };
    world.validate().map_err(usage)?;

    let kinds: Vec<PolicyKind> = match &file.policies {
        Some(labels) => labels
            .iter()
            .map(|l| {
                PolicyKind::parse(l).ok_or_else(|| usage(format!("unknown policy '{l}'")))
            })
            .collect::<Result<_, _>>()?,
        None => PolicyKind::ALL.to_vec(),
    };
    let policies = kinds.into_iter().map(PolicySpec::new).collect();

    let config = ExperimentConfig {
        world,
        prior,
        n_robots: robots,
        n_trials: trials,
        master_seed: seed,
        policies,
    };
    let report = run_experiment(&config).map_err(|e| match e {
        crate::sim::SimError::TrialFailed { .. } => runtime(e),
        other => usage(other),
    })?;

    let manifest = RunManifest::new("simulate")
        .with_config(args.config.as_deref())
        .with_seed(Some(seed))
        .with_outputs(&[args.out.as_ref(), args.csv.as_ref()])
        .with_timestamp(args.timestamp.clone());
    let json = serde_json::to_string_pretty(&SimulateReportFile {
        manifest: &manifest,
        report: &report,
    })
    .map_err(runtime)?;

    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv_string())
            .map_err(|e| runtime(format!("writing {}: {e}", path.display())))?;
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &json)
                .map_err(|e| runtime(format!("writing {}: {e}", path.display())))?;
            println!(
                "simulate: {} trials, {} stages, {} robots, seed {}",
                trials, stages, robots, seed
            );
            println!("{:<10} {:>12} {:>10} {:>10}", "policy", "mean_reward", "utility%", "sem");
            for p in &report.policies {
                println!(
                    "{:<10} {:>12.4} {:>10.2} {:>10.4}",
                    p.policy,
                    p.mean_reward,
                    p.mean_utility * 100.0,
                    p.sem_utility
                );
            }
        }
        None => print!("{json}"),
    }
    Ok(())
}

pub struct FrontierArgs {
    pub grid: PathBuf,
    pub path: PathBuf,
    pub spacing: f64,
    pub radius: f64,
    pub out: Option<PathBuf>,
}

pub fn cmd_frontier(args: &FrontierArgs) -> Result<(), CliError> {
    let grid = VoxelGrid::load(&args.grid)
        .map_err(|e| usage(format!("grid {}: {e}", args.grid.display())))?;
    let path = PathTrace::load(&args.path)
        .map_err(|e| usage(format!("path {}: {e}", args.path.display())))?;
    let rewards = rewards_along_path(&grid, &path, args.spacing, args.radius).map_err(usage)?;
    write_or_stdout(args.out.as_ref(), &rewards.to_csv_string())?;
    if let Some(out) = &args.out {
        println!(
            "wrote {} decision points to {}",
            rewards.points().len(),
            out.display()
        );
    }
    Ok(())
}

pub struct CompareArgs {
    pub rewards: PathBuf,
    /// Defaults to the histogram of the recorded sequence itself.
    pub prior: Option<String>,
    pub robots: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub timestamp: Option<String>,
}

#[derive(Serialize)]
struct CompareRow {
    policy: String,
    indices: Vec<usize>,
    rewards: Vec<f64>,
    total_reward: f64,
    utility: f64,
}

#[derive(Serialize)]
struct CompareReportFile<'a> {
    manifest: &'a RunManifest,
    n_stages: usize,
    n_robots: usize,
    rows: &'a [CompareRow],
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let recorded = RewardSequence::load(&args.rewards)
        .map_err(|e| usage(format!("rewards {}: {e}", args.rewards.display())))?;
    let sequence = recorded.rewards();

    let prior: Arc<dyn Prior> = match &args.prior {
        Some(spec) => parse_prior_spec(spec)?,
        None => Arc::new(
            crate::frontier::prior_from_rewards(&recorded).map_err(usage)?,
        ),
    };

    let oracle_idx = oracle(&sequence, args.robots).map_err(usage)?;
    let oracle_total = reward_of(&sequence, &oracle_idx);

    let mut rows = Vec::new();
    for kind in PolicyKind::ALL {
        let spec = PolicySpec::new(kind)
            .with_prior(Arc::clone(&prior))
            .with_seed(args.seed);
        let indices = spec.deployments(&sequence, args.robots).map_err(runtime)?;
        let picked: Vec<f64> = indices.iter().map(|&j| sequence[j - 1]).collect();
        let total: f64 = picked.iter().sum();
        rows.push(CompareRow {
            policy: kind.label().to_string(),
            indices,
            rewards: picked,
            total_reward: total,
            utility: if oracle_total > 0.0 { total / oracle_total } else { 1.0 },
        });
    }

    let manifest = RunManifest::new("compare")
        .with_seed(Some(args.seed))
        .with_outputs(&[args.out.as_ref()])
        .with_timestamp(args.timestamp.clone());
    let json = serde_json::to_string_pretty(&CompareReportFile {
        manifest: &manifest,
        n_stages: sequence.len(),
        n_robots: args.robots,
        rows: &rows,
    })
    .map_err(runtime)?;

    match &args.out {
        Some(path) => {
            std::fs::write(path, &json)
                .map_err(|e| runtime(format!("writing {}: {e}", path.display())))?;
            println!("{:<10} {:>12} {:>9}  indices", "policy", "total_reward", "utility%");
            for row in &rows {
                println!(
                    "{:<10} {:>12.2} {:>9.2}  {:?}",
                    row.policy,
                    row.total_reward,
                    row.utility * 100.0,
                    row.indices
                );
            }
        }
        None => print!("{json}"),
    }
    Ok(())
}

pub struct FitCmpArgs {
    pub hist: PathBuf,
    pub lambda_grid: String,
    pub nu_grid: String,
    pub out: Option<PathBuf>,
    pub timestamp: Option<String>,
}

#[derive(Serialize)]
struct FitCmpReportFile<'a> {
    manifest: &'a RunManifest,
    lambda: f64,
    nu: f64,
    z: f64,
    truncation_len: usize,
}

pub fn cmd_fit_cmp(args: &FitCmpArgs) -> Result<(), CliError> {
    let hist = EmpiricalPrior::load(&args.hist)
        .map_err(|e| usage(format!("histogram {}: {e}", args.hist.display())))?;
    let lambda_grid = parse_grid_spec(&args.lambda_grid)?;
    let nu_grid = parse_grid_spec(&args.nu_grid)?;
    let (lambda, nu) = fit_cmp(&hist, &lambda_grid, &nu_grid).map_err(|e| match e {
        DistError::NoFeasibleFit => runtime(e),
        other => usage(other),
    })?;
    let fitted = CmpPrior::new(lambda, nu).map_err(runtime)?;

    let manifest = RunManifest::new("fit-cmp")
        .with_outputs(&[args.out.as_ref()])
        .with_timestamp(args.timestamp.clone());
    let json = serde_json::to_string_pretty(&FitCmpReportFile {
        manifest: &manifest,
        lambda,
        nu,
        z: fitted.z(),
        truncation_len: fitted.truncation_len(),
    })
    .map_err(runtime)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, &json)
                .map_err(|e| runtime(format!("writing {}: {e}", path.display())))?;
            println!("fit-cmp: lambda = {lambda}, nu = {nu}");
        }
        None => print!("{json}"),
    }
    Ok(())
}
