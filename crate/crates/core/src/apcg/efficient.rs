use alloc::vec;
use alloc::vec::Vec;

use super::lazy::{pow_table_len, LazyScaled};
use crate::error::check_len;
use crate::math::sqrt;
use crate::{BlockSampler, CompositeProblem, Error, Result, SeparableRegularizer, SmoothOracle};

/// Strongly convex APCG in change-of-variables form.
///
/// With `ρ = (1 − α)/(1 + α)` and `α = √μ/n` the iterates are
/// `x = ū/ρ + v`, `y = ū + v`, `z = −ū/ρ + v`, where `ū = ρ^{k+1}u` decays lazily.
/// The iterate `y` is materialized for the gradient oracle at every step.
#[derive(Debug, Clone)]
pub struct EfficientState {
    u_bar: LazyScaled,
    v: Vec<f64>,
    alpha: f64,
    rho: f64,
    nalpha: f64,
    y: Vec<f64>,
    grad: Vec<f64>,
    base: Vec<f64>,
    center: Vec<f64>,
    out: Vec<f64>,
    k: usize,
}

impl EfficientState {
    /// `u = 0`, `v = x0`. Requires `μ > 0`.
    pub fn new<F: SmoothOracle, R: SeparableRegularizer>(
        problem: &CompositeProblem<F, R>,
        x0: &[f64],
    ) -> Result<Self> {
        let mu = problem.mu();
        if !(mu > 0.0) {
            return Err(Error::Config(
                "the change-of-variables method requires μ > 0".into(),
            ));
        }
        check_len(problem.dim(), x0.len())?;
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("starting point must be finite".into()));
        }
        if problem.regularizer().eval(problem.partition(), x0) == f64::INFINITY {
            return Err(Error::InvalidInput(
                "starting point lies outside dom Ψ".into(),
            ));
        }
        let n = problem.num_blocks();
        let alpha = sqrt(mu) / n as f64;
        let rho = (1.0 - alpha) / (1.0 + alpha);
        let m = problem.partition().max_block_size();
        Ok(Self {
            u_bar: LazyScaled::zeros(x0.len(), rho, pow_table_len(n)),
            v: x0.to_vec(),
            alpha,
            rho,
            nalpha: n as f64 * alpha,
            y: x0.to_vec(),
            grad: vec![0.0; m],
            base: vec![0.0; m],
            center: vec![0.0; m],
            out: vec![0.0; m],
            k: 0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn iterations(&self) -> usize {
        self.k
    }

    pub fn step<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        sampler: &mut BlockSampler,
    ) -> usize {
        let i = sampler.next_block(problem.num_blocks());
        self.step_at(problem, i);
        i
    }

    pub fn step_at<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
        block: usize,
    ) {
        for (j, y) in self.y.iter_mut().enumerate() {
            *y = self.u_bar.get(j) + self.v[j];
        }
        let r = problem.partition().range(block);
        let sz = r.len();
        problem
            .smooth()
            .partial_gradient(&self.y, block, &mut self.grad[..sz]);
        let w = self.nalpha * problem.lipschitz()[block];
        for (t, j) in r.clone().enumerate() {
            self.base[t] = self.v[j] - self.u_bar.get(j);
            self.center[t] = self.base[t] - self.grad[t] / w;
        }
        problem
            .regularizer()
            .prox_block(block, &self.center[..sz], w, &mut self.out[..sz]);
        let cu = 0.5 * (1.0 - self.nalpha);
        let cv = 0.5 * (1.0 + self.nalpha);
        for (t, j) in r.enumerate() {
            let h = self.out[t] - self.base[t];
            let u = self.rho * (self.u_bar.get(j) - cu * h);
            self.u_bar.set_next(j, u);
            self.v[j] += cv * h;
        }
        self.u_bar.tick();
        self.k += 1;
    }

    pub fn x_into(&self, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.u_bar.get(j) / self.rho + self.v[j];
        }
    }

    /// Point at which the next step evaluates the gradient.
    pub fn y_into(&self, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.u_bar.get(j) + self.v[j];
        }
    }

    pub fn z_into(&self, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.v[j] - self.u_bar.get(j) / self.rho;
        }
    }

    pub fn x(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.v.len()];
        self.x_into(&mut v);
        v
    }

    pub fn y(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.v.len()];
        self.y_into(&mut v);
        v
    }

    pub fn z(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.v.len()];
        self.z_into(&mut v);
        v
    }
}
