use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "parid", version, about = "Preferential attachment with random initial degrees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write degree snapshots and the edge trace.
    Simulate(SimulateArgs),
    /// Run independent replicas and the concentration diagnostics.
    Ensemble(EnsembleArgs),
    /// Tabulate limit laws and constants.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Check the inequality lemmas; exits 1 if any verdict fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Exact degree distribution of a small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    /// Power-law exponent of the initial degrees.
    #[arg(long, conflicts_with = "pmf", required_unless_present = "pmf")]
    pub alpha: Option<f64>,
    /// Finite initial-degree law as `1:p1,2:p2,...`.
    #[arg(long)]
    pub pmf: Option<String>,
    /// `auto` (horizon scheme by alpha), `none`, or an inclusive integer cap.
    #[arg(long, default_value = "auto")]
    pub truncate: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub k_max: u64,
    /// Refuse runs whose expected edge endpoints exceed this.
    #[arg(long, default_value_t = parid::process::DEFAULT_ENDPOINT_LIMIT)]
    pub endpoint_limit: f64,
    /// Disable the resource guard.
    #[arg(long)]
    pub no_guard: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Output directory.
    #[arg(long, default_value = "parid-out/simulate")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long)]
    pub steps: u64,
    #[arg(long)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub tracked_k: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Earlier checkpoint of the spread comparison; defaults to the first checkpoint.
    #[arg(long)]
    pub tau_early: Option<u64>,
    /// Later checkpoint of the spread comparison; defaults to the final step.
    #[arg(long)]
    pub tau_late: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub conc_threshold: f64,
    #[arg(long, default_value_t = 0.7)]
    pub nonconc_threshold: f64,
    /// Output directory.
    #[arg(long, default_value = "parid-out/ensemble")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum TheoryCommand {
    /// Limit proportions b_k at exponent 2.
    Bk {
        #[arg(long)]
        k_max: u64,
        #[arg(long, default_value = "parid-out/theory_bk.csv")]
        out: PathBuf,
    },
    /// Finite-horizon b'_k(t) with the recursion residual.
    Bkprime {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        k_max: u64,
        #[arg(long, default_value = "parid-out/theory_bkprime.csv")]
        out: PathBuf,
    },
    /// c, C(alpha, t) and C_inf for 1 < alpha < 2.
    Constants {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value = "parid-out/theory_constants.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Monte Carlo check of the total edge count bound (1 < alpha < 2).
    Lemma31 {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "parid-out/verify_lemma31.jsonl")]
        out: PathBuf,
    },
    /// Exact check of the single large draw bound (1 < alpha < 2).
    Lemma32 {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        gamma: Vec<f64>,
        #[arg(long, default_value = "parid-out/verify_lemma32.jsonl")]
        out: PathBuf,
    },
    /// Edge-count law at exponent 2 over an ensemble.
    Edges {
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 50)]
        replicas: usize,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Checkpoints; defaults to ten evenly spaced steps ending at t.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<u64>,
        #[arg(long, default_value = "parid-out/verify_edges.jsonl")]
        out: PathBuf,
    },
    /// Inverse moments of partial sums at exponent 2.
    Invmoments {
        #[arg(long)]
        t: u64,
        /// Defaults to t.
        #[arg(long)]
        s: Option<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        ell: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "parid-out/verify_invmoments.jsonl")]
        out: PathBuf,
    },
    /// Randomized sweep of the product difference inequality.
    Product {
        #[arg(long, default_value_t = 100_000)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "parid-out/verify_product.jsonl")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub t: u64,
    /// Initial-degree law as `1:p1,2:p2,...`.
    #[arg(long)]
    pub pmf: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Also simulate this many runs and report the total-variation distance.
    #[arg(long)]
    pub compare_samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "parid-out/oracle.jsonl")]
    pub out: PathBuf,
}
