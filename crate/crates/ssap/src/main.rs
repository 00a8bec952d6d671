//! `ssap`: threshold tables, policy comparisons, simulated experiments, and
//! frontier-reward extraction from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ssap::cli::{
    cmd_compare, cmd_fit_cmp, cmd_frontier, cmd_simulate, cmd_thresholds, CompareArgs, FitCmpArgs,
    FrontierArgs, SimulateArgs, ThresholdsArgs,
};

#[derive(Parser)]
#[command(
    name = "ssap",
    version,
    about = "Sequential stochastic assignment toolkit for online deployment decisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the deployment-threshold table and emit it as CSV.
    Thresholds {
        /// Prior spec: poisson:L, cmp:L:N, uniform:A:B, or hist:PATH.
        #[arg(long)]
        prior: String,
        /// Number of decision stages N.
        #[arg(long)]
        stages: usize,
        /// Number of deployments R (1 <= R <= N).
        #[arg(long)]
        robots: usize,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a repeated-trial policy comparison and emit a JSON report.
    Simulate {
        /// JSON config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed for sequence and policy streams.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of Monte-Carlo trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Stages per trial.
        #[arg(long)]
        stages: Option<usize>,
        /// Deployments per trial.
        #[arg(long)]
        robots: Option<usize>,
        /// Shortcut: use a Poisson prior with this rate.
        #[arg(long)]
        lambda: Option<f64>,
        /// JSON report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV summary path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Timestamp string recorded in the manifest (omitted when absent
        /// so repeated runs stay byte-identical).
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Extract a deployment-reward sequence from an occupancy grid and a
    /// carrier path.
    Frontier {
        /// Voxel grid file (VGRID1 text format).
        #[arg(long)]
        grid: PathBuf,
        /// Carrier path CSV (x,y,z with header).
        #[arg(long)]
        path: PathBuf,
        /// Decision-point spacing along the path, meters.
        #[arg(long, default_value_t = 2.5)]
        spacing: f64,
        /// Sensing radius around each decision point, meters.
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every policy over a recorded reward sequence.
    Compare {
        /// Reward CSV produced by `frontier` (index,x,y,z,reward).
        #[arg(long)]
        rewards: PathBuf,
        /// Prior spec; defaults to the histogram of the recorded sequence.
        #[arg(long)]
        prior: Option<String>,
        /// Number of deployments R.
        #[arg(long)]
        robots: usize,
        /// Seed for the random baseline.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Timestamp string recorded in the manifest.
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Grid-search a Conway-Maxwell-Poisson fit to a histogram CSV.
    FitCmp {
        /// Histogram CSV (value,count with header).
        #[arg(long)]
        hist: PathBuf,
        /// Lambda grid as lo:hi:step.
        #[arg(long, default_value = "0.5:15:0.5")]
        lambda_grid: String,
        /// Nu grid as lo:hi:step.
        #[arg(long, default_value = "0.1:3:0.1")]
        nu_grid: String,
        /// JSON report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Timestamp string recorded in the manifest.
        #[arg(long)]
        timestamp: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let result = match cli.command {
        Command::Thresholds {
            prior,
            stages,
            robots,
            out,
        } => cmd_thresholds(&ThresholdsArgs {
            prior,
            stages,
            robots,
            out,
        }),
        Command::Simulate {
            config,
            seed,
            trials,
            stages,
            robots,
            lambda,
            out,
            csv,
            timestamp,
        } => cmd_simulate(&SimulateArgs {
            config,
            seed,
            trials,
            stages,
            robots,
            lambda,
            out,
            csv,
            timestamp,
        }),
        Command::Frontier {
            grid,
            path,
            spacing,
            radius,
            out,
        } => cmd_frontier(&FrontierArgs {
            grid,
            path,
            spacing,
            radius,
            out,
        }),
        Command::Compare {
            rewards,
            prior,
            robots,
            seed,
            out,
            timestamp,
        } => cmd_compare(&CompareArgs {
            rewards,
            prior,
            robots,
            seed,
            out,
            timestamp,
        }),
        Command::FitCmp {
            hist,
            lambda_grid,
            nu_grid,
            out,
            timestamp,
        } => cmd_fit_cmp(&FitCmpArgs {
            hist,
            lambda_grid,
            nu_grid,
            out,
            timestamp,
        }),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
