use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "uncoded-bc",
    version,
    about = "Uncoded transmission of a bivariate Gaussian source over a two-receiver Gaussian broadcast channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corner points, thresholds and capacities of the configuration.
    Report {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// CSV trace of the uncoded boundary with the converse bound.
    Trace {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Number of uniformly spaced alpha values in [0, 1].
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Converse bound, optimal witness and D2~* at one Receiver-1 distortion.
    Bound {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_negative_numbers = true)]
        d1: f64,
    },
    /// Monte-Carlo run of the uncoded scheme.
    Simulate {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Mixing weight; beta = 1 - alpha.
        #[arg(
            long,
            allow_negative_numbers = true,
            conflicts_with = "d1_target",
            required_unless_present = "d1_target"
        )]
        alpha: Option<f64>,
        /// Choose alpha so that the uncoded Receiver-1 distortion equals this.
        #[arg(long, allow_negative_numbers = true)]
        d1_target: Option<f64>,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the report as a one-row CSV file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that the uncoded curve meets the converse bound and that the
    /// joint rate-distortion oracle agrees with the Receiver-1 capacity.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Residual tolerance, relative to sigma2.
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e-9)]
        tol: f64,
        /// Tolerance of the rate-distortion oracle check, in bits.
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e-4)]
        oracle_tol: f64,
    },
}

/// Source and channel parameters; defaults are the reference configuration
/// `sigma2 = 1, rho = 0.5, P = 1, N1 = 1, N2 = 2`.
#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0, conflicts_with_all = ["var1", "var2"])]
    pub sigma2: f64,
    /// Correlation in (-1, 1); negative values are folded to |rho|.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub power: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub n1: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
    pub n2: f64,
    /// Variance of S1 when the components have different variances.
    #[arg(long, allow_negative_numbers = true, requires = "var2")]
    pub var1: Option<f64>,
    /// Variance of S2 when the components have different variances.
    #[arg(long, allow_negative_numbers = true, requires = "var1")]
    pub var2: Option<f64>,
}
