//! Runs every `(λ, solver, seed)` cell of an experiment and writes per-epoch CSV traces
//! plus a summary file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use apcg_core::apcg::Control;
use apcg_core::erm::{run_solver, ErmProblem, Loss, RunOptions, Solver};
use apcg_core::synth::synth_binary;
use apcg_core::SparseColMatrix;
use rayon::prelude::*;

use crate::config::{DataSource, ExperimentConfig, LossKind};
use crate::error::{CliError, Result};
use crate::libsvm::{load_libsvm, DatasetMeta};

pub const TRACE_HEADER: [&str; 6] = [
    "epoch",
    "primal",
    "dual",
    "gap",
    "dual_subgrad_norm_sq",
    "wall_time_s",
];

pub const SUMMARY_HEADER: [&str; 14] = [
    "dataset",
    "n",
    "d",
    "sparsity",
    "lambda",
    "solver",
    "seed",
    "epochs_run",
    "epochs_to_tol",
    "final_primal",
    "final_dual",
    "final_gap",
    "wall_time_s",
    "trace_file",
];

pub const SUMMARY_FILE: &str = "summary.csv";

/// One line of the summary file.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub n: usize,
    pub d: usize,
    pub sparsity: f64,
    pub lambda: f64,
    pub solver: Solver,
    pub seed: u64,
    pub epochs_run: usize,
    /// First epoch whose gap is at most the tolerance.
    pub epochs_to_tol: Option<usize>,
    pub final_primal: f64,
    pub final_dual: f64,
    pub final_gap: f64,
    pub wall_time_s: f64,
    pub trace_file: PathBuf,
}

/// Loads or generates the data set named by the config.
pub fn load_data(source: &DataSource) -> Result<(SparseColMatrix, Vec<f64>, DatasetMeta)> {
    match source {
        DataSource::File(path) => load_libsvm(path),
        DataSource::Synthetic(spec) => {
            let (a, b) = synth_binary(spec)?;
            let name = format!(
                "synth_n{}_d{}_p{}_s{}",
                spec.n, spec.d, spec.density, spec.seed
            );
            let meta = DatasetMeta::new(name, &a)?;
            Ok((a, b, meta))
        }
    }
}

pub fn trace_file_name(dataset: &str, solver: Solver, lambda: f64, seed: u64) -> String {
    format!("{dataset}_{solver}_lambda{lambda:e}_seed{seed}.csv")
}

fn build_problem(
    cfg: &ExperimentConfig,
    a: &SparseColMatrix,
    b: &[f64],
    lambda: f64,
) -> Result<ErmProblem> {
    let loss = match cfg.loss {
        LossKind::SmoothedHinge => Loss::SmoothedHinge,
        LossKind::Square => Loss::Square {
            targets: vec![1.0; b.len()],
        },
    };
    Ok(ErmProblem::from_labeled(
        a.clone(),
        b,
        loss,
        lambda,
        cfg.gamma,
    )?)
}

fn run_cell(
    prob: &ErmProblem,
    cfg: &ExperimentConfig,
    meta: &DatasetMeta,
    solver: Solver,
    seed: u64,
) -> Result<SummaryRow> {
    let opts = RunOptions {
        solver,
        max_epochs: cfg.epochs,
        seed,
        tol: cfg.tol,
        afg: cfg.afg,
    };
    let start = Instant::now();
    let mut times = Vec::with_capacity(cfg.epochs + 1);
    let res = run_solver(prob, &opts, |_| {
        times.push(start.elapsed().as_secs_f64());
        Control::Continue
    })?;
    let name = trace_file_name(&meta.name, solver, prob.lambda(), seed);
    let path = cfg.out.join(&name);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
    w.write_record(TRACE_HEADER)?;
    for (r, t) in res.reports.iter().zip(&times) {
        w.write_record([
            r.epoch.to_string(),
            fmt_f64(r.primal),
            fmt_f64(r.dual),
            fmt_f64(r.gap),
            fmt_f64(r.dual_subgrad_norm_sq),
            format!("{t:.6}"),
        ])?;
    }
    w.flush()
        .map_err(|e| CliError::io(path.display().to_string(), e))?;
    let last = res.reports.last().expect("a run reports at least epoch 0");
    Ok(SummaryRow {
        dataset: meta.name.clone(),
        n: meta.n,
        d: meta.d,
        sparsity: meta.sparsity,
        lambda: prob.lambda(),
        solver,
        seed,
        epochs_run: last.epoch,
        epochs_to_tol: res.converged_epoch,
        final_primal: last.primal,
        final_dual: last.dual,
        final_gap: last.gap,
        wall_time_s: times.last().copied().unwrap_or(0.0),
        trace_file: PathBuf::from(name),
    })
}

fn csv_io(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path.display().to_string(), io),
        other => CliError::Config(format!("{}: {other:?}", path.display())),
    }
}

/// Shortest decimal that reads back to the same `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Runs all cells and writes the traces and `summary.csv` into `cfg.out`. Rows come back
/// in `λ`, solver, seed order regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let (a, b, meta) = load_data(&cfg.data)?;
    let problems = cfg
        .lambdas
        .iter()
        .map(|&l| build_problem(cfg, &a, &b, l))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(cfg.out.display().to_string(), e))?;
    let cells: Vec<(&ErmProblem, Solver, u64)> = problems
        .iter()
        .flat_map(|p| {
            cfg.solvers
                .iter()
                .flat_map(move |&s| cfg.seeds.iter().map(move |&seed| (p, s, seed)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        cells
            .par_iter()
            .map(|&(p, s, seed)| run_cell(p, cfg, &meta, s, seed))
            .collect::<Result<Vec<_>>>()
    })?;
    write_summary(&cfg.out.join(SUMMARY_FILE), &rows)?;
    Ok(rows)
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.n.to_string(),
            r.d.to_string(),
            fmt_f64(r.sparsity),
            format!("{:e}", r.lambda),
            r.solver.to_string(),
            r.seed.to_string(),
            r.epochs_run.to_string(),
            r.epochs_to_tol.map_or_else(String::new, |e| e.to_string()),
            fmt_f64(r.final_primal),
            fmt_f64(r.final_dual),
            fmt_f64(r.final_gap),
            format!("{:.6}", r.wall_time_s),
            r.trace_file.display().to_string(),
        ])?;
    }
    w.flush()
        .map_err(|e| CliError::io(path.display().to_string(), e))
}
