use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msroot_core::{Factorization, MethodConfig, Pipeline, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "msroot", version, about = "Macaulay / Moller-Stetter polynomial system solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a system given in the JSON polynomial format.
    Solve(SolveArgs),
    /// Generate a test system.
    Gen(GenArgs),
    /// Run a conditioning or accuracy sweep and write CSV.
    Experiment(ExperimentArgs),
    /// Write the FLOP-model comparison CSV.
    Flops(FlopsArgs),
    /// Time each method on random dense systems (wall clock, informational).
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Nullspace,
    Dbd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorizationArg {
    Svd,
    Qrp,
    Lq,
}

#[derive(Debug, Clone, Args)]
pub struct MethodArgs {
    /// Reduction pipeline.
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    /// Factorization used to pick the quotient basis.
    #[arg(long, value_enum, default_value = "svd")]
    pub factorization: FactorizationArg,
    /// Premultiply the Macaulay matrix by a random Gaussian matrix.
    #[arg(long)]
    pub rand_combos: bool,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scale factor applied to every internal tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
}

impl MethodArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances::default().scaled(self.tol)
    }

    pub fn config(&self) -> MethodConfig {
        let pipeline = match self.method {
            MethodArg::Direct => Pipeline::Direct,
            MethodArg::Nullspace => Pipeline::Nullspace,
            MethodArg::Dbd => Pipeline::DegreeByDegree,
        };
        let factorization = match self.factorization {
            FactorizationArg::Svd => Factorization::Svd,
            FactorizationArg::Qrp => Factorization::Qrp,
            FactorizationArg::Lq => Factorization::Lq,
        };
        MethodConfig::new(pipeline, factorization)
            .with_random_combinations(self.rand_combos)
            .with_seed(self.seed)
            .with_tolerances(self.tolerances())
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// System file in the JSON polynomial format.
    pub system: PathBuf,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Devastating,
    Perturbed,
    Random,
    Conic,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Number of variables.
    #[arg(long)]
    pub n: usize,
    /// Devastating-example scale.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Standard deviation of the perturbation.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Degree of random dense polynomials.
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    /// Cluster size for conic systems.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Cluster spread for conic systems.
    #[arg(long, default_value_t = 1e-3)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ExperimentKind {
    DevastatingGrowth,
    PerturbGrowth,
    ClusterGrowth,
    MethodCompare,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Devastating-example scale (0.1 for devastating_growth, 0.01 for perturb_growth).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Dimensions swept, e.g. `2..5` or `2,3,4`.
    #[arg(long, default_value = "2..5", value_parser = parse_usize_list)]
    pub ns: List<usize>,
    /// Perturbation sizes for perturb_growth.
    #[arg(long, default_value = "0,1e-4,1e-3,1e-2", value_parser = parse_f64_list)]
    pub deltas: List<f64>,
    /// Seeds per sweep point (default 10, or 50 for method_compare).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Dimension of conic systems for cluster_growth.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Cluster sizes for cluster_growth.
    #[arg(long, default_value = "2..5", value_parser = parse_usize_list)]
    pub ks: List<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub alpha: f64,
    /// Dimensions for method_compare.
    #[arg(long, default_value = "3..5", value_parser = parse_usize_list)]
    pub dims: List<usize>,
    /// Degree of random systems for method_compare.
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    /// Methods compared by method_compare, as labels such as `direct-svd` or `nullspace-qrp+rc`.
    #[arg(long, default_value = "direct-svd,direct-qrp", value_parser = parse_method_list)]
    pub methods: List<MethodConfig>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    MatrixShape,
    Literal,
}

#[derive(Debug, Clone, Args)]
pub struct FlopsArgs {
    #[arg(long, default_value = "3,4", value_parser = parse_usize_list)]
    pub dims: List<usize>,
    #[arg(long, default_value = "2..60", value_parser = parse_u32_list)]
    pub degrees: List<u32>,
    /// How Macaulay row counts are taken in the cost model.
    #[arg(long, value_enum, default_value = "matrix-shape")]
    pub convention: Convention,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "2,3", value_parser = parse_usize_list)]
    pub dims: List<usize>,
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(
        long,
        default_value = "direct-svd,direct-qrp,direct-lq,nullspace-svd,nullspace-qrp,nullspace-lq,dbd-svd",
        value_parser = parse_method_list
    )]
    pub methods: List<MethodConfig>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Comma-separated list (or inclusive `a..b` range) given as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T> std::ops::Deref for List<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

fn parse_int_list<T>(s: &str) -> Result<Vec<T>, String>
where
    T: std::str::FromStr + Copy + PartialOrd + TryFrom<u64>,
    u64: TryFrom<T>,
{
    let parse = |x: &str| x.trim().parse::<T>().map_err(|_| format!("'{x}' is not a valid integer"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse(a)?, parse(b)?);
        let (lo, hi) = match (u64::try_from(a), u64::try_from(b)) {
            (Ok(lo), Ok(hi)) if lo <= hi => (lo, hi),
            _ => return Err(format!("'{s}' is not an increasing range")),
        };
        (lo..=hi)
            .map(|v| T::try_from(v).map_err(|_| format!("'{s}' is out of range")))
            .collect()
    } else {
        s.split(',').map(parse).collect()
    }
}

fn parse_usize_list(s: &str) -> Result<List<usize>, String> {
    parse_int_list(s).map(List)
}

fn parse_u32_list(s: &str) -> Result<List<u32>, String> {
    parse_int_list(s).map(List)
}

fn parse_f64_list(s: &str) -> Result<List<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number")))
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

fn parse_method_list(s: &str) -> Result<List<MethodConfig>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<MethodConfig>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}
