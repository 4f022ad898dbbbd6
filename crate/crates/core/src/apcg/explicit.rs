use alloc::vec;
use alloc::vec::Vec;

use super::schedule::{ApcgSchedule, ScheduleStep};
use crate::error::check_len;
use crate::math::sqrt;
use crate::{BlockSampler, CompositeProblem, Error, Result, SeparableRegularizer, SmoothOracle};

/// `α_k` of the `μ = 0` method from `α_{k−1}`: the positive root of
/// `α² = (1 − α)α_{k−1}²`.
pub fn next_alpha_nsc(prev: f64) -> f64 {
    let a2 = prev * prev;
    2.0 * a2 / (a2 + sqrt(a2 * a2 + 4.0 * a2))
}

/// Explicit iterates `x, y, z` of the APCG method.
#[derive(Debug, Clone)]
pub struct ExplicitState {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    z_prev: Vec<f64>,
    grad: Vec<f64>,
    center: Vec<f64>,
    k: usize,
}

impl ExplicitState {
    /// `x = z = x0`. `x0` must lie in `dom Ψ`.
    pub fn new<F: SmoothOracle, R: SeparableRegularizer>(
        problem: &CompositeProblem<F, R>,
        x0: &[f64],
    ) -> Result<Self> {
        check_len(problem.dim(), x0.len())?;
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("starting point must be finite".into()));
        }
        if problem.regularizer().eval(problem.partition(), x0) == f64::INFINITY {
            return Err(Error::InvalidInput(
                "starting point lies outside dom Ψ".into(),
            ));
        }
        let m = problem.partition().max_block_size();
        Ok(Self {
            x: x0.to_vec(),
            y: x0.to_vec(),
            z: x0.to_vec(),
            z_prev: x0.to_vec(),
            grad: vec![0.0; m],
            center: vec![0.0; m],
            k: 0,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// The extrapolated point of the most recent step (`x0` before the first step).
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn iterations(&self) -> usize {
        self.k
    }

    /// General step; advances `schedule` and samples a block.
    pub fn step_general<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        schedule: &mut ApcgSchedule,
        sampler: &mut BlockSampler,
    ) -> Result<usize> {
        let i = sampler.next_block(problem.num_blocks());
        self.step_general_at(problem, schedule, i)?;
        Ok(i)
    }

    pub fn step_general_at<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        schedule: &mut ApcgSchedule,
        block: usize,
    ) -> Result<()> {
        if schedule.n() != problem.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: problem.num_blocks(),
                got: schedule.n(),
            });
        }
        let ScheduleStep {
            alpha,
            gamma,
            gamma_next,
            beta,
            ..
        } = schedule.step()?;
        let ag = alpha * gamma;
        let denom = ag + gamma_next;
        for ((y, &z), &x) in self.y.iter_mut().zip(&self.z).zip(&self.x) {
            *y = (ag * z + gamma_next * x) / denom;
        }
        self.z_prev.copy_from_slice(&self.z);
        for (z, &y) in self.z.iter_mut().zip(&self.y) {
            *z = (1.0 - beta) * *z + beta * y;
        }
        let n = problem.num_blocks() as f64;
        let mu = schedule.mu();
        self.block_update(problem, alpha, block);
        self.x.copy_from_slice(&self.y);
        for j in problem.partition().range(block) {
            let zp = self.z_prev[j];
            self.x[j] = self.y[j] + n * alpha * (self.z[j] - zp) + mu / n * (zp - self.y[j]);
        }
        Ok(())
    }

    /// Strongly convex step, `α = √μ / n` constant.
    pub fn step_sc<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        alpha: f64,
        sampler: &mut BlockSampler,
    ) -> Result<usize> {
        let i = sampler.next_block(problem.num_blocks());
        self.step_sc_at(problem, alpha, i)?;
        Ok(i)
    }

    pub fn step_sc_at<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        alpha: f64,
        block: usize,
    ) -> Result<()> {
        if !(problem.mu() > 0.0) {
            return Err(Error::Config(
                "the strongly convex method requires μ > 0".into(),
            ));
        }
        for ((y, &z), &x) in self.y.iter_mut().zip(&self.z).zip(&self.x) {
            *y = (x + alpha * z) / (1.0 + alpha);
        }
        self.z_prev.copy_from_slice(&self.z);
        for (z, &y) in self.z.iter_mut().zip(&self.y) {
            *z = (1.0 - alpha) * *z + alpha * y;
        }
        self.block_update(problem, alpha, block);
        let n = problem.num_blocks() as f64;
        let (a, b) = (n * alpha, n * alpha * alpha);
        for j in 0..self.x.len() {
            let (y, z, zp) = (self.y[j], self.z[j], self.z_prev[j]);
            self.x[j] = y + a * (z - zp) + b * (zp - y);
        }
        Ok(())
    }

    /// `μ = 0` step. Takes `α_{k−1}` and returns `α_k`.
    pub fn step_nsc<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        alpha_prev: f64,
        sampler: &mut BlockSampler,
    ) -> Result<f64> {
        let i = sampler.next_block(problem.num_blocks());
        self.step_nsc_at(problem, alpha_prev, i)
    }

    pub fn step_nsc_at<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        alpha_prev: f64,
        block: usize,
    ) -> Result<f64> {
        if !(alpha_prev > 0.0 && alpha_prev.is_finite()) {
            return Err(Error::InvalidInput("α_{k−1} must be positive".into()));
        }
        let alpha = next_alpha_nsc(alpha_prev);
        for ((y, &z), &x) in self.y.iter_mut().zip(&self.z).zip(&self.x) {
            *y = (1.0 - alpha) * x + alpha * z;
        }
        self.z_prev.copy_from_slice(&self.z);
        self.block_update(problem, alpha, block);
        let n = problem.num_blocks() as f64;
        self.x.copy_from_slice(&self.y);
        for j in problem.partition().range(block) {
            self.x[j] += n * alpha * (self.z[j] - self.z_prev[j]);
        }
        Ok(alpha)
    }

    /// Replaces block `i` of `z` with
    /// `prox(z_i − ∇_i f(y)/(nαL_i), nαL_i)`.
    fn block_update<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        alpha: f64,
        block: usize,
    ) {
        let p = problem.partition();
        let r = p.range(block);
        let sz = r.len();
        problem
            .smooth()
            .partial_gradient(&self.y, block, &mut self.grad[..sz]);
        let w = problem.num_blocks() as f64 * alpha * problem.lipschitz()[block];
        for (t, j) in r.clone().enumerate() {
            self.center[t] = self.z[j] - self.grad[t] / w;
        }
        problem
            .regularizer()
            .prox_block(block, &self.center[..sz], w, &mut self.z[r]);
        self.k += 1;
    }
}
