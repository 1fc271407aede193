use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "efsphere", version, about = "Unit-sphere distance graphs over finite fields")]
pub struct Cli {
    /// Directory for cached graphs and spectra
    #[arg(long, global = true, env = "EFSPHERE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// TOML file with defaults; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// -v for info, -vv for debug
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Space {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite field tables
    #[command(subcommand)]
    Field(FieldCmd),
    #[command(subcommand)]
    Sphere(SphereCmd),
    /// Lines through non-isotropic square-type vectors
    #[command(subcommand)]
    Omega(OmegaCmd),
    #[command(subcommand)]
    Distance(DistanceCmd),
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Check(CheckCmd),
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    Info {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Monic modulus as c0,c1,...,1
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SphereCmd {
    Enumerate(Space),
}

#[derive(Subcommand, Debug)]
pub enum OmegaCmd {
    Build(Space),
}

#[derive(Subcommand, Debug)]
pub enum DistanceCmd {
    /// Distance set of the points in a file
    Set {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    Build {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        relation: usize,
    },
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    Partition(Space),
    SchemeAxioms(Space),
    SpectralBound {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        slack: Option<f64>,
    },
    Mixing {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        relation: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCmd {
    Falconer {
        #[command(flatten)]
        space: Space,
        /// Subset size multiplier: |E| = ceil(C q^{d/2})
        #[arg(long = "C")]
        c_mult: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV destination
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        min_delta_ratio: Option<f64>,
        #[arg(long)]
        min_relation_fraction: Option<f64>,
    },
}
