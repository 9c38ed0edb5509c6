//! Command line front end of `walkrange`.
//!
//! Every subcommand produces a [`Report`], printed as JSON (default) or CSV.

pub mod commands;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{error_json, round_dp, round_sig, Report, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(
    name = "walkrange",
    version,
    about = "Multiple-point range statistics of closed simple random walks"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Worker threads for the parallel engines (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Significant digits of probabilities and moments; decimal places of
    /// order-one constants (rates, covariances, xi).
    #[arg(long, default_value_t = 6, global = true, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution of N_2k on closed walks of length 2n.
    Dist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        lmax: usize,
        /// Coefficient ring; exact by default up to length 512.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Distribution of the range on closed walks of length 2n.
    RangeDist {
        #[arg(long)]
        n: usize,
        /// Largest range listed (default n + 1).
        #[arg(long)]
        mmax: Option<usize>,
    },
    /// Binomial moment E_n(prod binomial(N_2k, m)) for a spec "k:m,k:m".
    Moments {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// E_n(N_2k) and E_n(ran) on Z^d with their asymptotic forms.
    FirstMoment {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Large-n limits: the tables of doublepoints, tail rates and covariances.
    #[command(group = clap::ArgGroup::new("what").required(true).args(["table", "xi"]))]
    Asymp {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: Option<u8>,
        /// Largest multiplicity of table 2.
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// Limit ratio E_n(ran^r) / E_n(ran)^r.
        #[arg(long)]
        xi: Option<u32>,
    },
    /// Exhaustive enumeration of closed walks on Z^d.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Multiplicities k whose N_2k are recorded.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        track: Vec<usize>,
        /// Also record the range.
        #[arg(long)]
        range: bool,
    },
    /// Compare generating-function counts with enumeration for n <= n-max.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

/// Outcome of a command: the report and whether it found a failure.
pub struct Outcome {
    pub report: Report,
    pub failed: bool,
}

pub fn run(cli: &Cli) -> walkrange::error::Result<Outcome> {
    let digits = cli.output.digits as usize;
    match &cli.command {
        Command::Dist {
            n,
            k,
            lmax,
            backend,
        } => commands::dist(*n, *k, *lmax, *backend, digits),
        Command::RangeDist { n, mmax } => commands::range_dist(*n, mmax.unwrap_or(n + 1), digits),
        Command::Moments { spec, n, backend } => commands::moments(spec, *n, *backend, digits),
        Command::FirstMoment { d, k, n } => commands::first_moment(*d, *k, *n, digits),
        Command::Asymp { table, kmax, xi } => match (table, xi) {
            (Some(t), _) => commands::asymp_table(*t, *kmax, digits),
            (None, Some(r)) => commands::asymp_xi(*r, digits),
            (None, None) => unreachable!("clap requires one of the two"),
        },
        Command::Oracle { n, d, track, range } => commands::oracle(*n, *d, track, *range),
        Command::Verify { n_max } => commands::verify(*n_max),
    }
    .map(|mut o| {
        o.report
            .parameters
            .insert("digits".into(), serde_json::Value::from(digits));
        o
    })
}
