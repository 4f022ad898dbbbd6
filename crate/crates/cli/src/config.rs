//! Experiment configuration: a flat TOML file whose keys mirror the command-line flags.
//! Flags given on the command line replace the corresponding file values.

use std::path::{Path, PathBuf};

use apcg_core::baselines::AfgConfig;
use apcg_core::erm::Solver;
use apcg_core::synth::SynthSpec;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    SmoothedHinge,
    Square,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::SmoothedHinge => "smoothed-hinge",
            Self::Square => "square",
        }
    }
}

impl std::str::FromStr for LossKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hinge" | "smoothed-hinge" | "smoothed_hinge" => Ok(Self::SmoothedHinge),
            "square" | "ridge" => Ok(Self::Square),
            _ => Err(CliError::Config(format!(
                "unknown loss '{s}' (expected smoothed-hinge or square)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    Synthetic(SynthSpec),
}

/// Parses `n,d,sparsity`.
pub fn parse_synthetic(s: &str) -> Result<(usize, usize, f64)> {
    let bad = || {
        CliError::Config(format!(
            "expected n,d,sparsity for the synthetic data set, got '{s}'"
        ))
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, d, p] = parts.as_slice() else {
        return Err(bad());
    };
    Ok((
        n.parse().map_err(|_| bad())?,
        d.parse().map_err(|_| bad())?,
        p.parse().map_err(|_| bad())?,
    ))
}

/// One number or a list of numbers.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v],
            Self::Many(v) => v,
        }
    }
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    data: Option<PathBuf>,
    synthetic: Option<String>,
    synthetic_seed: Option<u64>,
    feature_decay: Option<f64>,
    normalize: Option<bool>,
    label_noise: Option<f64>,
    loss: Option<String>,
    lambda: Option<OneOrMany<f64>>,
    gamma: Option<f64>,
    solver: Option<OneOrMany<String>>,
    seed: Option<OneOrMany<u64>>,
    epochs: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    afg_initial_step: Option<f64>,
    afg_backtrack: Option<f64>,
    afg_grow: Option<f64>,
    afg_max_backtracks: Option<usize>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(path.display().to_string(), e))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Command-line values; `None` and empty lists mean "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub data: Option<PathBuf>,
    pub synthetic: Option<String>,
    pub loss: Option<String>,
    pub lambda: Vec<f64>,
    pub gamma: Option<f64>,
    pub solver: Vec<String>,
    pub seed: Vec<u64>,
    pub epochs: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub loss: LossKind,
    pub lambdas: Vec<f64>,
    pub gamma: f64,
    pub solvers: Vec<Solver>,
    pub seeds: Vec<u64>,
    pub epochs: usize,
    /// Gap tolerance; a run stops at the first epoch whose gap is at most this.
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub jobs: usize,
    pub afg: AfgConfig,
}

impl ExperimentConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        let (data_path, synthetic) = if flags.data.is_some() || flags.synthetic.is_some() {
            (flags.data, flags.synthetic)
        } else {
            (file.data, file.synthetic)
        };
        let data = match (data_path, synthetic) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either data or synthetic, not both".into(),
                ))
            }
            (Some(p), None) => DataSource::File(p),
            (None, Some(s)) => {
                let (n, d, density) = parse_synthetic(&s)?;
                let mut spec = SynthSpec {
                    n,
                    d,
                    density,
                    seed: file.synthetic_seed.unwrap_or(0),
                    ..SynthSpec::default()
                };
                if let Some(v) = file.feature_decay {
                    spec.feature_decay = v;
                }
                if let Some(v) = file.normalize {
                    spec.normalize = v;
                }
                if let Some(v) = file.label_noise {
                    spec.label_noise = v;
                }
                DataSource::Synthetic(spec)
            }
            (None, None) => {
                return Err(CliError::Config(
                    "no data set: give data or synthetic".into(),
                ))
            }
        };
        let loss = flags
            .loss
            .or(file.loss)
            .map_or(Ok(LossKind::SmoothedHinge), |s| s.parse())?;
        let lambdas = pick(flags.lambda, file.lambda);
        let solver_names = pick(flags.solver, file.solver);
        let solvers = if solver_names.is_empty() {
            vec![Solver::Apcg]
        } else {
            solver_names
                .iter()
                .map(|s| s.parse::<Solver>())
                .collect::<Result<_, _>>()?
        };
        let seeds = {
            let s = pick(flags.seed, file.seed);
            if s.is_empty() {
                vec![0]
            } else {
                s
            }
        };
        let mut afg = AfgConfig::default();
        afg.initial_step = file.afg_initial_step.or(afg.initial_step);
        afg.backtrack = file.afg_backtrack.unwrap_or(afg.backtrack);
        afg.grow = file.afg_grow.unwrap_or(afg.grow);
        afg.max_backtracks = file.afg_max_backtracks.unwrap_or(afg.max_backtracks);
        let cfg = Self {
            data,
            loss,
            lambdas,
            gamma: flags.gamma.or(file.gamma).unwrap_or(1.0),
            solvers,
            seeds,
            epochs: flags.epochs.or(file.epochs).unwrap_or(100),
            tol: flags.tol.or(file.tol),
            out: flags
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("results")),
            jobs: flags.jobs.or(file.jobs).unwrap_or_else(default_jobs),
            afg,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(CliError::Config("at least one λ is required".into()));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(CliError::Config(format!("λ must be positive, got {l}")));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(CliError::Config(format!(
                "γ must be positive, got {}",
                self.gamma
            )));
        }
        if self.loss == LossKind::Square && self.gamma > 1.0 {
            return Err(CliError::Config(format!(
                "the square loss needs γ ≤ 1, got {}",
                self.gamma
            )));
        }
        if self.solvers.is_empty() || self.seeds.is_empty() {
            return Err(CliError::Config(
                "at least one solver and one seed are required".into(),
            ));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        if let DataSource::Synthetic(s) = &self.data {
            if s.n == 0 || s.d == 0 || !(s.density > 0.0 && s.density <= 1.0) {
                return Err(CliError::Config(format!(
                    "synthetic data needs n, d ≥ 1 and sparsity in (0, 1], got {},{},{}",
                    s.n, s.d, s.density
                )));
            }
        }
        self.afg.validate()?;
        Ok(())
    }
}

fn pick<T>(flag: Vec<T>, file: Option<OneOrMany<T>>) -> Vec<T> {
    if flag.is_empty() {
        file.map(OneOrMany::into_vec).unwrap_or_default()
    } else {
        flag
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
