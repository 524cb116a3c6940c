use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "monosplit",
    version,
    about = "Recommend and score microservice decompositions of a monolith"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split, filter and stem raw class words into corpus.json.
    Preprocess {
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write a class similarity matrix as similarity.csv.
    Similarity {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Kind::Blended)]
        kind: Kind,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// How call counts between two classes are read.
        #[arg(long, value_enum, default_value_t = Structural::Symmetric)]
        structural: Structural,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Cluster classes into services and score the result.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Score an existing decomposition.
    Evaluate {
        #[arg(long)]
        calls: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
        #[command(flatten)]
        emit: Emit,
    },
    /// Rerun a density-based decomposition over a range of eps values.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0.0)]
        eps_from: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_to: f64,
        #[arg(long, default_value_t = 0.05)]
        eps_step: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Class-by-class call counts (CSV, or JSON with a .json extension).
    #[arg(long)]
    pub calls: PathBuf,
    /// Raw class words (tokens.csv) or a preprocessed corpus.json.
    #[arg(long)]
    pub tokens: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Approach::Codependent)]
    pub approach: Approach,
    #[arg(long, value_enum, default_value_t = Algorithm::Bmsc)]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 0.65)]
    pub eps: f64,
    #[arg(long, default_value_t = 5)]
    pub min_pts: usize,
    /// min_pts used when BMSC groups its intermediate modes.
    #[arg(long, default_value_t = 1)]
    pub min_pts_imodes: usize,
    /// Weight of structural similarity; semantic similarity gets 1 - alpha.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// BMSC grid as ROWSxCOLS.
    #[arg(long, default_value = "3x3", value_parser = parse_grid)]
    pub grid: (usize, usize),
    #[arg(long, default_value = "linear5")]
    pub neighborhood: String,
    /// Mean-shift bandwidth; estimated from the data when absent.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Similarity graph keeps pairs strictly above this value.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = GnMode::WeakestEdge)]
    pub gn_mode: GnMode,
    /// Rescale point encodings before clustering.
    #[arg(long, value_enum, default_value_t = Scaling::None)]
    pub scaling: Scaling,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct Emit {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json")]
    pub format: Vec<Format>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Structural,
    Semantic,
    Blended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Structural {
    Symmetric,
    Directed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Approach {
    Naive,
    Codependent,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dbscan,
    Meanshift,
    Bmsc,
    GirvanNewman,
    Louvain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GnMode {
    WeakestEdge,
    Betweenness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    None,
    Minmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("grid sides must be positive integers, got `{s}`"))
    };
    Ok((parse(r)?, parse(c)?))
}
