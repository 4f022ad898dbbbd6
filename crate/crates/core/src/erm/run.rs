use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::dual_state::ErmDualState;
use super::problem::{ErmProblem, PrimalDualReport};
use crate::apcg::Control;
use crate::baselines::{sdca_epoch, AfgConfig, AfgState, ErmRpcgState, SdcaState};
use crate::{BlockSampler, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    Apcg,
    Sdca,
    Afg,
    Rpcg,
}

impl Solver {
    pub const ALL: [Solver; 4] = [Solver::Apcg, Solver::Sdca, Solver::Afg, Solver::Rpcg];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Apcg => "apcg",
            Solver::Sdca => "sdca",
            Solver::Afg => "afg",
            Solver::Rpcg => "rpcg",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown solver '{s}' (expected one of: {})",
                    solver_names()
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub solver: Solver,
    pub max_epochs: usize,
    pub seed: u64,
    /// Stop at the first epoch whose primal-dual gap is at most this.
    pub tol: Option<f64>,
    pub afg: AfgConfig,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            solver: Solver::Apcg,
            max_epochs: 100,
            seed: 0,
            tol: None,
            afg: AfgConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// One report per epoch, starting with epoch 0.
    pub reports: Vec<PrimalDualReport>,
    /// Final dual iterate.
    pub x: Vec<f64>,
    /// First epoch at which the gap reached `tol`.
    pub converged_epoch: Option<usize>,
}

enum Runner<'a> {
    Apcg(ErmDualState),
    Sdca(SdcaState),
    Rpcg(ErmRpcgState),
    Afg(
        AfgState,
        crate::CompositeProblem<super::DualSmooth<'a>, super::DualRegularizer<'a>>,
    ),
}

/// Runs one solver from `x = 0`, reporting `(P(ω(x)), D(x))` once per epoch.
///
/// An epoch is `n` coordinate steps for APCG, SDCA and RPCG, and one iteration for AFG.
/// `monitor` sees every report and may stop the run early.
pub fn run_solver<M>(prob: &ErmProblem, opts: &RunOptions, mut monitor: M) -> Result<RunResult>
where
    M: FnMut(&PrimalDualReport) -> Control,
{
    if let Some(t) = opts.tol {
        if !(t > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {t}"
            )));
        }
    }
    let mut sampler = BlockSampler::new(opts.seed);
    let mut runner = match opts.solver {
        Solver::Apcg => Runner::Apcg(ErmDualState::new(prob)),
        Solver::Sdca => Runner::Sdca(SdcaState::new(prob)),
        Solver::Rpcg => Runner::Rpcg(ErmRpcgState::new(prob)),
        Solver::Afg => {
            let comp = prob.relocated();
            let sigma = prob.gamma() / prob.n() as f64;
            let x0 = alloc::vec![0.0; prob.n()];
            Runner::Afg(AfgState::new(&comp, &x0, Some(sigma), opts.afg)?, comp)
        }
    };
    let current = |r: &Runner| -> Vec<f64> {
        match r {
            Runner::Apcg(s) => s.x(),
            Runner::Sdca(s) => s.x().to_vec(),
            Runner::Rpcg(s) => s.x().to_vec(),
            Runner::Afg(s, _) => s.x().to_vec(),
        }
    };
    let mut reports = Vec::new();
    let mut converged_epoch = None;
    let mut epoch = 0;
    loop {
        let x = current(&runner);
        let rep = prob.report(&x, epoch)?;
        reports.push(rep);
        let reached = opts.tol.is_some_and(|t| rep.gap <= t);
        if reached && converged_epoch.is_none() {
            converged_epoch = Some(epoch);
        }
        if monitor(&rep) == Control::Stop || reached || epoch == opts.max_epochs {
            return Ok(RunResult {
                reports,
                x,
                converged_epoch,
            });
        }
        match &mut runner {
            Runner::Apcg(s) => {
                for _ in 0..prob.n() {
                    s.step(prob, &mut sampler)?;
                }
            }
            Runner::Sdca(s) => sdca_epoch(prob, s, &mut sampler),
            Runner::Rpcg(s) => s.epoch(prob, &mut sampler),
            Runner::Afg(s, comp) => s.step(comp)?,
        }
        epoch += 1;
    }
}

/// Lower-case names of all solvers, comma separated.
fn solver_names() -> String {
    let names: Vec<&str> = Solver::ALL.iter().map(|s| s.name()).collect();
    names.join(", ")
}
