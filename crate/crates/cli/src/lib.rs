//! Implementation of the `msroot` command line.

pub mod args;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use msroot_core::analysis::{self, median, trial_seed, ConditioningRecord, CSV_HEADER};
use msroot_core::flops;
use msroot_core::generators;
use msroot_core::io::{self, VERSION};
use msroot_core::{MethodConfig, RowCounts, Tolerances};
use serde_json::json;
use thiserror::Error;

pub use args::Cli;
use args::{
    BenchArgs, Command, Convention, ExperimentArgs, ExperimentKind, Family, FlopsArgs, GenArgs, OutArgs, SolveArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] msroot_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for a non-generic input system, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_genericity_violation() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::Flops(a) => cmd_flops(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &OutArgs, mut text: String) -> Result<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tolerances_json(tol: &Tolerances) -> String {
    serde_json::to_string(tol).expect("tolerances serialize")
}

/// Leading comment line of every CSV artifact.
fn csv_preamble(fields: &[(&str, String)]) -> String {
    let mut line = format!("# msroot {VERSION}");
    for (k, v) in fields {
        let _ = write!(line, " {k}={v}");
    }
    line.push('\n');
    line
}

pub fn cmd_solve(a: &SolveArgs) -> Result<()> {
    let text = read(&a.system)?;
    let sys = io::parse_system(&text)?;
    let res = msroot_core::solve(&sys, &a.method.config())?;
    emit(&a.out, io::roots_to_json(&res))
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    let (sys, meta) = match a.family {
        Family::Devastating => (
            generators::devastating(a.n, a.eps, a.seed)?,
            json!({"family": "devastating", "n": a.n, "eps": a.eps, "seed": a.seed}),
        ),
        Family::Perturbed => (
            generators::perturbed_devastating(a.n, a.eps, a.delta, a.seed)?,
            json!({"family": "perturbed_devastating", "n": a.n, "eps": a.eps, "delta": a.delta, "seed": a.seed}),
        ),
        Family::Random => (
            generators::random_dense(a.n, a.deg, a.seed)?,
            json!({"family": "random_dense", "n": a.n, "degree": a.deg, "seed": a.seed}),
        ),
        Family::Conic => {
            let conic = generators::clustered_conic_random(a.n, a.k, a.alpha, a.seed)?;
            let meta = json!({
                "family": "clustered_conic",
                "n": a.n,
                "k": a.k,
                "alpha": a.alpha,
                "seed": a.seed,
                "prescribed_roots": conic.roots,
                "max_prescribed_residual": conic.max_residual,
                "verified": conic.max_residual <= 1e-9,
            });
            (conic.system, meta)
        }
    };
    let mut meta = meta;
    meta["version"] = json!(VERSION);
    emit(&a.out, io::system_to_json(&sys, Some(meta)))
}

fn records_csv(records: &[ConditioningRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<()> {
    let cfg = a.method.config();
    let kind = a.kind.to_possible_value_name();
    let mut out = csv_preamble(&[
        ("experiment", kind),
        ("method", cfg.label()),
        ("seed", a.method.seed.to_string()),
        ("tol_scale", a.method.tol.to_string()),
        ("tolerances", tolerances_json(&cfg.tolerances)),
    ]);
    match a.kind {
        ExperimentKind::DevastatingGrowth => {
            let eps = a.eps.unwrap_or(0.1);
            let recs = analysis::devastating_sweep(&a.ns, eps, a.method.seed, &cfg)?;
            out.push_str(&records_csv(&recs));
            let g = analysis::records_growth_rate(&recs, false)?;
            let _ = writeln!(out, "# growth_rate={g:.6}");
        }
        ExperimentKind::PerturbGrowth => {
            let eps = a.eps.unwrap_or(1e-2);
            let trials = a.trials.unwrap_or(10);
            let (recs, rates) = analysis::perturb_growth(&a.ns, eps, &a.deltas, trials, a.method.seed, &cfg)?;
            out.push_str(&records_csv(&recs));
            let meds: Vec<f64> = rates.iter().map(|(_, gs)| median(gs)).collect();
            for ((delta, _), g) in rates.iter().zip(&meds) {
                let _ = writeln!(out, "# delta={delta:e} median_growth_rate={g:.6}");
            }
            let decreasing = meds.windows(2).all(|w| w[1] < w[0]);
            let _ = writeln!(out, "# strictly_decreasing={decreasing}");
        }
        ExperimentKind::ClusterGrowth => {
            let trials = a.trials.unwrap_or(10);
            let (recs, summary) = analysis::cluster_growth(a.n, &a.ks, a.alpha, trials, a.method.seed, &cfg)?;
            out.push_str(&records_csv(&recs));
            for s in &summary {
                let _ = writeln!(
                    out,
                    "# k={} median_eig_cond={:.6e} median_root_cond={:.6e}",
                    s.k, s.median_eig_cond, s.median_root_cond
                );
            }
            let g = analysis::records_growth_rate(&recs, true)?;
            let _ = writeln!(out, "# growth_rate={g:.6}");
        }
        ExperimentKind::MethodCompare => {
            let trials = a.trials.unwrap_or(50);
            let methods: Vec<MethodConfig> = a
                .methods
                .iter()
                .map(|m| m.with_seed(a.method.seed).with_tolerances(cfg.tolerances))
                .collect();
            let rows = analysis::method_compare(&a.dims, a.deg, trials, a.method.seed, &methods)?;
            out.push_str("dim");
            for m in &methods {
                let _ = write!(out, ",{}", m.label());
            }
            out.push('\n');
            for &dim in a.dims.iter() {
                let _ = write!(out, "{dim}");
                for r in rows.iter().filter(|r| r.dim == dim) {
                    let _ = write!(out, ",{:.6e}", r.median_residual);
                }
                out.push('\n');
            }
            for r in rows.iter().filter(|r| r.failures > 0) {
                let _ = writeln!(out, "# dim={} method={} failures={}", r.dim, r.method, r.failures);
            }
        }
    }
    emit(&a.out, out)
}

trait ValueName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> ValueName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

pub fn cmd_flops(a: &FlopsArgs) -> Result<()> {
    let conv = match a.convention {
        Convention::MatrixShape => RowCounts::MatrixShape,
        Convention::Literal => RowCounts::Literal,
    };
    let rows = flops::emit_comparison(&a.dims, &a.degrees, conv)?;
    let mut out = csv_preamble(&[("flops_convention", a.convention.to_possible_value_name())]);
    out.push_str(&flops::comparison_csv(&rows));
    emit(&a.out, out)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let tol = Tolerances::default().scaled(a.tol);
    let mut out = csv_preamble(&[
        ("bench", "wall_clock".into()),
        ("seed", a.seed.to_string()),
        ("tol_scale", a.tol.to_string()),
        ("tolerances", tolerances_json(&tol)),
    ]);
    out.push_str("dim,degree,method,trials,median_seconds,max_residual\n");
    for &dim in a.dims.iter() {
        let systems = (0..a.trials)
            .map(|t| generators::random_dense(dim, a.deg, trial_seed(a.seed, t as u64)))
            .collect::<msroot_core::Result<Vec<_>>>()?;
        for m in a.methods.iter() {
            let cfg = m.with_seed(a.seed).with_tolerances(tol);
            let mut times = Vec::with_capacity(a.trials);
            let mut worst = 0.0f64;
            for sys in &systems {
                let start = Instant::now();
                let res = msroot_core::solve(sys, &cfg)?;
                times.push(start.elapsed().as_secs_f64());
                worst = worst.max(res.max_residual());
            }
            let _ = writeln!(
                out,
                "{dim},{},{},{},{:.6e},{:.3e}",
                a.deg,
                cfg.label(),
                a.trials,
                median(&times),
                worst
            );
        }
    }
    emit(&a.out, out)
}
