use std::path::PathBuf;
use std::process::ExitCode;

use apcg_cli::check::{check_invariants, CheckConfig};
use apcg_cli::config::{ExperimentConfig, FileConfig, Overrides};
use apcg_cli::experiment::{run_experiment, SUMMARY_FILE};
use apcg_cli::libsvm::{load_libsvm, save_libsvm};
use apcg_cli::Result;
use apcg_core::synth::{synth_binary, SynthSpec};
use clap::{Args, Parser, Subcommand};

/// Accelerated proximal coordinate gradient experiments on regularized ERM duals.
#[derive(Debug, Parser)]
#[command(name = "apcg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run solvers over a λ × solver × seed grid and write CSV traces.
    Run(RunArgs),
    /// Run the diagnostic suite; exits nonzero if any check fails.
    Check(CheckArgs),
    /// Print size, sparsity and norms of a LIBSVM file.
    Info { path: PathBuf },
    /// Write a synthetic data set in LIBSVM format.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// LIBSVM data file (`.gz` accepted).
    #[arg(long, conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    /// Synthetic data set `n,d,sparsity`.
    #[arg(long, value_name = "N,D,SPARSITY")]
    synthetic: Option<String>,
    /// `smoothed-hinge` or `square`.
    #[arg(long)]
    loss: Option<String>,
    /// Regularization weight; repeatable.
    #[arg(long = "lambda", value_name = "LAMBDA", allow_negative_numbers = true)]
    lambdas: Vec<f64>,
    /// Loss smoothness parameter.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// `apcg`, `sdca`, `afg` or `rpcg`; repeatable.
    #[arg(long = "solver", value_name = "SOLVER")]
    solvers: Vec<String>,
    /// Sampling seed; repeatable.
    #[arg(long = "seed", value_name = "SEED")]
    seeds: Vec<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Stop a run once its primal-dual gap is at most this.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cells run in parallel.
    #[arg(long, env = "APCG_JOBS")]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Blocks of the lasso instance (at most 1000).
    #[arg(long, default_value_t = CheckConfig::default().blocks)]
    blocks: usize,
    #[arg(long, default_value_t = CheckConfig::default().seed)]
    seed: u64,
    /// Seeds averaged by the envelope check.
    #[arg(long, default_value_t = CheckConfig::default().envelope_seeds)]
    envelope_seeds: usize,
    #[arg(long, default_value_t = CheckConfig::default().envelope_epochs)]
    envelope_epochs: usize,
    #[arg(long, hide = true)]
    corrupt_alpha: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Output file; a `.gz` suffix compresses it.
    out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    d: usize,
    #[arg(long, default_value_t = 0.1)]
    sparsity: f64,
    /// Feature scale exponent; larger values are more ill-conditioned.
    #[arg(long, default_value_t = 0.0)]
    feature_decay: f64,
    #[arg(long, default_value_t = 0.1)]
    label_noise: f64,
    /// Keep raw column norms instead of normalizing to 1.
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(args: RunArgs) -> Result<bool> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        data: args.data,
        synthetic: args.synthetic,
        loss: args.loss,
        lambda: args.lambdas,
        gamma: args.gamma,
        solver: args.solvers,
        seed: args.seeds,
        epochs: args.epochs,
        tol: args.tol,
        out: args.out,
        jobs: args.jobs,
    };
    let cfg = ExperimentConfig::resolve(file, flags)?;
    let rows = run_experiment(&cfg)?;
    println!(
        "{:<10} {:>10} {:>6} {:>8} {:>13} {:>12}",
        "solver", "lambda", "seed", "epochs", "to_tol", "final_gap"
    );
    for r in &rows {
        let to_tol = r
            .epochs_to_tol
            .map_or_else(|| "-".into(), |e| e.to_string());
        println!(
            "{:<10} {:>10.1e} {:>6} {:>8} {:>13} {:>12.3e}",
            r.solver.name(),
            r.lambda,
            r.seed,
            r.epochs_run,
            to_tol,
            r.final_gap
        );
    }
    println!(
        "wrote {} traces and {}",
        rows.len(),
        cfg.out.join(SUMMARY_FILE).display()
    );
    Ok(true)
}

fn check(args: CheckArgs) -> Result<bool> {
    let cfg = CheckConfig {
        blocks: args.blocks,
        seed: args.seed,
        envelope_seeds: args.envelope_seeds,
        envelope_epochs: args.envelope_epochs,
        corrupt_alpha: args.corrupt_alpha,
    };
    let outcomes = check_invariants(&cfg, |c| {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    })?;
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("all {} checks passed", outcomes.len());
    } else {
        println!("{failed} of {} checks failed", outcomes.len());
    }
    Ok(failed == 0)
}

fn info(path: PathBuf) -> Result<bool> {
    let (a, b, meta) = load_libsvm(&path)?;
    let stats = a.column_stats();
    let positives = b.iter().filter(|&&l| l > 0.0).count();
    println!("name      {}", meta.name);
    println!("examples  {}", meta.n);
    println!("features  {}", meta.d);
    println!("nonzeros  {}", meta.nnz);
    println!("sparsity  {:.4}%", 100.0 * meta.sparsity);
    println!(
        "labels    {positives} positive, {} negative",
        meta.n - positives
    );
    println!("R         {:.6}", stats.max_col_norm);
    println!("‖A‖₂      {:.6}", stats.spectral_norm);
    Ok(true)
}

fn synth(args: SynthArgs) -> Result<bool> {
    let spec = SynthSpec {
        n: args.n,
        d: args.d,
        density: args.sparsity,
        feature_decay: args.feature_decay,
        normalize: !args.no_normalize,
        label_noise: args.label_noise,
        seed: args.seed,
    };
    let (a, b) = synth_binary(&spec)?;
    save_libsvm(&args.out, &a, &b)?;
    println!(
        "wrote {} examples, {} features, {} nonzeros to {}",
        a.ncols(),
        a.nrows(),
        a.nnz(),
        args.out.display()
    );
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Check(a) => check(a),
        Command::Info { path } => info(path),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
