//! `meanfix` — experiments with fixed-point iteration of mean
//! nonexpansive maps on `ℓ^p` sequence spaces.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use meanfix::commands::{
    cmd_certify, cmd_corpus, cmd_iterate, cmd_probe_center, cmd_probe_duality, cmd_probe_modulus,
    cmd_probe_opial, resolve_config,
};
use meanfix::config::ExperimentConfig;
use meanfix::exit;

#[derive(Parser)]
#[command(
    name = "meanfix",
    version,
    about = "Numerical laboratory for fixed-point iteration of mean nonexpansive maps on lp spaces",
    after_help = "Exit codes: 0 success/pass, 1 usage or config error, 2 mathematical violation."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every experiment; all optional, with per-command
/// defaults. A `--config FILE` carries the same keys, flags win.
#[derive(Args, Debug, Default)]
struct CommonFlags {
    /// Flat key=value experiment config file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Operator name (see `corpus`); parameters after a colon, e.g. scale:0.5.
    #[arg(long)]
    op: Option<String>,
    /// Multi-index weights, comma separated (e.g. 0.5,0.5).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Exponent: inequality power for certify, ambient norm exponent for probes.
    #[arg(long)]
    p: Option<f64>,
    /// Start vector: e<k>, zero, or a comma list (e.g. 1,1).
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Reference point (approximate fixed point) for distance diagnostics.
    #[arg(long = "ref", allow_hyphen_values = true)]
    reference: Option<String>,
    /// Iteration count / sequence length.
    #[arg(long)]
    n: Option<usize>,
    /// Window length for monotone subsequence extraction (defaults to the
    /// multi-index length, else 2).
    #[arg(long)]
    n0: Option<usize>,
    /// Sample count for seeded Monte Carlo.
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed; every report is reproducible from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Diagnostic tolerance (cluster/convergence checks; candidate
    /// residuals for `probe center`).
    #[arg(long)]
    tol: Option<f64>,
    /// Violation threshold for certification margins.
    #[arg(long = "margin-tol")]
    margin_tol: Option<f64>,
    /// Coordinate functional indices to record along traces (1-based).
    #[arg(long, value_delimiter = ',')]
    functionals: Option<Vec<usize>>,
    /// Write a JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write a CSV report here.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Write gnuplot two-column data here.
    #[arg(long = "plot-data", value_name = "PATH")]
    plot_data: Option<PathBuf>,
}

impl CommonFlags {
    fn resolve(self) -> anyhow::Result<ExperimentConfig> {
        let file = self.config.clone();
        let flags = ExperimentConfig {
            op: self.op,
            alpha: self.alpha,
            p: self.p,
            start: self.start,
            reference: self.reference,
            n: self.n,
            n0: self.n0,
            samples: self.samples,
            seed: self.seed,
            dim: self.dim,
            tol: self.tol,
            margin_tol: self.margin_tol,
            functionals: self.functionals,
            json: self.json,
            csv: self.csv,
            plot_data: self.plot_data,
        };
        resolve_config(flags, file.as_ref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in operator corpus.
    Corpus,
    /// Sampled falsification of the (alpha, p) mean-nonexpansiveness
    /// inequality; exit 2 with a witness when a violation is found.
    Certify {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Picard iteration with residuals, distance limits, weak-cluster and
    /// demiclosedness diagnostics.
    Iterate {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Banach-geometry probes.
    #[command(subcommand)]
    Probe(ProbeCommand),
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// Opial margins along the weakly null basis sequence (e_k).
    Opial {
        #[command(flatten)]
        common: CommonFlags,
        /// Claimed weak limit (default: zero).
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// Competitor point.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Canonical duality map: point evaluation (--x) or weak-continuity
    /// probe along the basis sequence (--weak).
    Duality {
        #[command(flatten)]
        common: CommonFlags,
        /// Point at which to evaluate the duality map.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Probe weak sequential continuity instead of a point evaluation.
        #[arg(long)]
        weak: bool,
    },
    /// Sampled modulus of convexity.
    Modulus {
        #[command(flatten)]
        common: CommonFlags,
        /// One or more separation values in (0, 2], comma separated.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Asymptotic center: minimize phi(y) = lim |T^n x - y| over fixed
    /// points.
    Center {
        #[command(flatten)]
        common: CommonFlags,
        /// Candidate grid lo:hi:step over the first coordinate.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Explicit fixed-point candidate (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        fixed: Vec<String>,
    },
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Corpus => cmd_corpus(),
        Command::Certify { common } => cmd_certify(&common.resolve()?),
        Command::Iterate { common } => cmd_iterate(&common.resolve()?),
        Command::Probe(probe) => match probe {
            ProbeCommand::Opial { common, u, v } => {
                cmd_probe_opial(&common.resolve()?, u.as_deref(), &v)
            }
            ProbeCommand::Duality { common, x, weak } => {
                cmd_probe_duality(&common.resolve()?, x.as_deref(), weak)
            }
            ProbeCommand::Modulus { common, eps } => cmd_probe_modulus(&common.resolve()?, &eps),
            ProbeCommand::Center {
                common,
                grid,
                fixed,
            } => cmd_probe_center(&common.resolve()?, grid.as_deref(), &fixed),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // keep exit 1 for usage errors (clap defaults to 2, which is
            // reserved for mathematical violations here)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = err.print();
                return ExitCode::from(exit::OK as u8);
            }
            let _ = err.print();
            return ExitCode::from(exit::CONFIG as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::CONFIG as u8)
        }
    }
}
