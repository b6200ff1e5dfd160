use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hypaffine::bicombing::BicombingKind;
use hypaffine::group::DEFAULT_ELEMENT_CAP;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "hypaffine",
    version,
    about = "Affine actions of hyperbolic groups on finite Cayley balls"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Presentation file.
    #[arg(long, global = true)]
    pub presentation: Option<PathBuf>,
    /// Ball radius.
    #[arg(long, global = true, default_value_t = 2)]
    pub radius: usize,
    /// Bicombing kinds, comma separated: tree, shortlex, shortlex-anti.
    #[arg(long, global = true, value_delimiter = ',')]
    pub bicombing: Vec<BicombingKind>,
    /// Seed for every sampled scan.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Element cap for ball enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP)]
    pub cap: usize,
    /// Tolerance for float checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Word-problem ball radius for Dehn presentations. Defaults to the
    /// radius the command needs.
    #[arg(long, global = true)]
    pub index_radius: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sphere sizes of the ball.
    Ball,
    /// Empirical area constant and quasi-geodesic constants.
    BicombingStats {
        /// Sampled triples when the exhaustive scan is too large.
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        /// Scan every triple regardless of size.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Full invariant suite on the kernel over the ball.
    Verify {
        /// Use this kernel CSV instead of building one.
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Seeded (s, v) pairs for the per-vector bound.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Operator-norm lower bounds against the uniform bound.
    Opnorm {
        /// Radius of the ball supporting the probed vectors.
        #[arg(long, default_value_t = 1)]
        subspace_radius: usize,
        /// Radius of the ball of translations; defaults to min(2, radius - subspace radius).
        #[arg(long)]
        scan_radius: Option<usize>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        iterations: usize,
        #[arg(long)]
        kernel: Option<PathBuf>,
    },
    /// Cocycle norms and the properness lower bound.
    Norms {
        #[arg(long)]
        kernel: Option<PathBuf>,
    },
    /// Orbit kernel and growth of a tree action.
    Action {
        /// Action file.
        #[arg(long)]
        action: PathBuf,
        /// Restrict the scan to words in these generators, e.g. "cd".
        #[arg(long)]
        generators: Option<String>,
    },
    /// Dump the kernel over the ball as CSV.
    Kernel {
        /// Build the orbit kernel of this action instead of a bicombing kernel.
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Validate a quasi-tree kernel file.
    Quasitree {
        #[arg(long)]
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ball => "ball",
            Command::BicombingStats { .. } => "bicombing-stats",
            Command::Verify { .. } => "verify",
            Command::Opnorm { .. } => "opnorm",
            Command::Norms { .. } => "norms",
            Command::Action { .. } => "action",
            Command::Kernel { .. } => "kernel",
            Command::Quasitree { .. } => "quasitree",
        }
    }
}
