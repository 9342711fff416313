use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Log-cost optimal transport and pseudo-cone tools.
///
/// Exit codes: 0 success, 1 verification failure, 2 construction or domain
/// error, 3 I/O, schema or usage error.
#[derive(Debug, Parser)]
#[command(name = "conic-transport", version)]
pub struct Cli {
    /// Seed for every random choice; falls back to CONIC_TRANSPORT_SEED, then 0.
    #[arg(long, global = true, env = "CONIC_TRANSPORT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Tolerance override NAME=VALUE (repeatable). Names: containment
    /// (pseudo-subdifferential gap, 1e-8), competitor (certification, 1e-9),
    /// monotone (cycle weight, 1e-9), map (compare-costs gap, 1e-9).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Cycles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Region {
    OmegaC,
    OmegaCDual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks c-cyclic monotonicity of a pairing; exits 1 if it fails.
    CheckMonotone {
        /// Pairing JSON: {"pairs":[{"v":[..],"u":[..]},..]}.
        #[arg(long)]
        pairs: PathBuf,
        /// Ambient cone JSON.
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Cycles)]
        method: Method,
        /// Report path; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the Rochet pseudo-cone of a monotone pairing and verifies that
    /// every pair lies in its pseudo-subdifferential.
    BuildCone {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        cone: PathBuf,
        /// Index of the base pair.
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solves the discrete Gauss image problem for μ on Ω_{C°} and ν on Ω_C.
    Solve {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        /// Cone JSON for measures that do not carry one.
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Number of random competitor plans to audit against.
        #[arg(long)]
        certify: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluates radial function, support function and reverse Gauss image
    /// of a pseudo-cone at query directions; writes CSV `kind,query,value`.
    Eval {
        /// Pseudo-cone JSON.
        #[arg(long)]
        k: PathBuf,
        /// Queries JSON: {"queries":[[..],..]}.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints c(u, v) = log|<u, v>|.
    Cost {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        u: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<f64>,
    },
    /// Samples a uniform discrete measure on Ω_C or Ω_{C°}.
    Sample {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, value_enum)]
        region: Region,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares a transport map {"map":[i_0,..]} against a stored solution.
    CompareCosts {
        #[arg(long)]
        sol: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the boundary of K ∩ plane as CSV `s,t,kind`.
    Section {
        #[arg(long)]
        k: PathBuf,
        /// Plane origin; defaults to the origin (n = 2 only).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        e1: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        e2: Option<Vec<f64>>,
        #[arg(long, default_value_t = 360)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
