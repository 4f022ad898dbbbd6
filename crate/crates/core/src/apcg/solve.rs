use alloc::vec;
use alloc::vec::Vec;

use super::efficient::EfficientState;
use super::explicit::ExplicitState;
use super::schedule::ApcgSchedule;
use crate::math::sqrt;
use crate::{BlockSampler, CompositeProblem, Error, Result, SeparableRegularizer, SmoothOracle};

/// Which APCG stepper [`solve`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// General schedule started from `γ_0`.
    General,
    /// `γ_0 = μ > 0`, explicit iterates.
    StronglyConvex,
    /// `μ = 0` recursion `α_k² = (1 − α_k)α_{k−1}²`.
    NonStronglyConvex,
    /// `γ_0 = μ > 0` in change-of-variables form.
    Efficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub variant: Variant,
    /// `γ_0` for [`Variant::General`] and [`Variant::NonStronglyConvex`]; defaults to 1.
    pub gamma0: Option<f64>,
    pub max_iters: usize,
    pub seed: u64,
    /// Iterations between objective evaluations; defaults to the number of blocks.
    pub trace_every: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            variant: Variant::General,
            gamma0: None,
            max_iters: 1000,
            seed: 0,
            trace_every: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iter: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub points: Vec<TracePoint>,
}

/// State handed to the monitor at every trace point.
#[derive(Debug)]
pub struct Checkpoint<'a> {
    pub iter: usize,
    pub x: &'a [f64],
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub iters: usize,
    pub trace: Trace,
}

/// Runs `opts.max_iters` APCG iterations from `x0`.
pub fn solve<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<Solution> {
    solve_with(problem, x0, opts, |_| Control::Continue)
}

/// As [`solve`], stopping early when `monitor` returns [`Control::Stop`].
pub fn solve_with<F, R, M>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    opts: &SolveOptions,
    mut monitor: M,
) -> Result<Solution>
where
    F: SmoothOracle,
    R: SeparableRegularizer,
    M: FnMut(&Checkpoint) -> Control,
{
    let n = problem.num_blocks();
    let mu = problem.mu();
    let every = opts.trace_every.unwrap_or(n).max(1);
    let gamma0 = opts.gamma0.unwrap_or(1.0);
    let mut sampler = BlockSampler::new(opts.seed);
    let mut trace = Trace::default();
    let mut buf = vec![0.0; problem.dim()];

    enum Stepper {
        General(ExplicitState, ApcgSchedule),
        Sc(ExplicitState, f64),
        Nsc(ExplicitState, f64),
        Eff(EfficientState),
    }
    let mut st = match opts.variant {
        Variant::General => Stepper::General(
            ExplicitState::new(problem, x0)?,
            ApcgSchedule::new(n, mu, gamma0)?,
        ),
        Variant::StronglyConvex => {
            if !(mu > 0.0) {
                return Err(Error::Config(
                    "the strongly convex variant requires μ > 0".into(),
                ));
            }
            Stepper::Sc(ExplicitState::new(problem, x0)?, sqrt(mu) / n as f64)
        }
        Variant::NonStronglyConvex => {
            if !(gamma0 > 0.0 && gamma0 <= 1.0) {
                return Err(Error::Config("γ_0 must lie in (0, 1]".into()));
            }
            Stepper::Nsc(ExplicitState::new(problem, x0)?, sqrt(gamma0) / n as f64)
        }
        Variant::Efficient => Stepper::Eff(EfficientState::new(problem, x0)?),
    };

    let mut k = 0;
    loop {
        if k % every == 0 || k == opts.max_iters {
            let x: &[f64] = match &st {
                Stepper::General(s, _) | Stepper::Sc(s, _) | Stepper::Nsc(s, _) => s.x(),
                Stepper::Eff(s) => {
                    s.x_into(&mut buf);
                    &buf
                }
            };
            let objective = problem.objective(x);
            trace.points.push(TracePoint { iter: k, objective });
            let stop = monitor(&Checkpoint {
                iter: k,
                x,
                objective,
            }) == Control::Stop;
            if stop || k == opts.max_iters {
                break;
            }
        }
        match &mut st {
            Stepper::General(s, sched) => {
                s.step_general(problem, sched, &mut sampler)?;
            }
            Stepper::Sc(s, a) => {
                s.step_sc(problem, *a, &mut sampler)?;
            }
            Stepper::Nsc(s, a) => {
                *a = s.step_nsc(problem, *a, &mut sampler)?;
            }
            Stepper::Eff(s) => {
                s.step(problem, &mut sampler);
            }
        }
        k += 1;
    }
    let x = match st {
        Stepper::General(s, _) | Stepper::Sc(s, _) | Stepper::Nsc(s, _) => s.x().to_vec(),
        Stepper::Eff(s) => s.x(),
    };
    Ok(Solution { x, iters: k, trace })
}
