use alloc::vec;
use alloc::vec::Vec;

use super::problem::ErmProblem;
use crate::{BlockPartition, CompositeProblem, SeparableRegularizer, SmoothOracle};

/// Smooth part `f(x) = ‖Ax‖²/(2λn²) + (γ/(2n))‖x‖²` of `−D` after moving `γ/(2n)‖x‖²` out
/// of the conjugate terms. Every evaluation costs a full pass over `A`.
#[derive(Debug, Clone)]
pub struct DualSmooth<'a> {
    prob: &'a ErmProblem,
    partition: BlockPartition,
    lipschitz: Vec<f64>,
    mu: f64,
}

/// `Ψ_i(x_i) = (1/n)φ_i*(−x_i) − (γ/(2n))x_i²`.
#[derive(Debug, Clone, Copy)]
pub struct DualRegularizer<'a> {
    prob: &'a ErmProblem,
}

impl<'a> DualSmooth<'a> {
    pub fn new(prob: &'a ErmProblem) -> Self {
        let c = prob.constants();
        Self {
            prob,
            partition: BlockPartition::scalar(prob.n()),
            lipschitz: c.lipschitz,
            mu: c.mu,
        }
    }

    fn ax(&self, x: &[f64]) -> Vec<f64> {
        let mut ax = vec![0.0; self.prob.d()];
        self.prob.matrix().matvec(x, &mut ax);
        ax
    }

    /// `γ/n`, the Euclidean strong convexity modulus.
    pub fn euclidean_convexity(&self) -> f64 {
        self.prob.gamma() / self.prob.n() as f64
    }
}

impl SmoothOracle for DualSmooth<'_> {
    fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.prob.n() as f64;
        let ax = self.ax(x);
        let q: f64 = ax.iter().map(|v| v * v).sum();
        let s: f64 = x.iter().map(|v| v * v).sum();
        q / (2.0 * self.prob.lambda() * n * n) + self.prob.gamma() / (2.0 * n) * s
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = self.prob.n() as f64;
        let ax = self.ax(x);
        self.prob.matrix().t_matvec(&ax, out);
        let s = 1.0 / (self.prob.lambda() * n * n);
        let g = self.prob.gamma() / n;
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = *o * s + g * xi;
        }
    }

    fn partial_gradient(&self, x: &[f64], block: usize, out: &mut [f64]) {
        let n = self.prob.n() as f64;
        let ax = self.ax(x);
        out[0] = self.prob.matrix().col_dot(block, &ax) / (self.prob.lambda() * n * n)
            + self.prob.gamma() / n * x[block];
    }

    fn lipschitz(&self) -> &[f64] {
        &self.lipschitz
    }

    fn convexity(&self) -> f64 {
        self.mu
    }
}

impl<'a> DualRegularizer<'a> {
    pub fn new(prob: &'a ErmProblem) -> Self {
        Self { prob }
    }
}

impl SeparableRegularizer for DualRegularizer<'_> {
    fn eval_block(&self, block: usize, xi: &[f64]) -> f64 {
        let t = self.prob.dual_term(block);
        let x = xi[0];
        if !t.contains(x) {
            return f64::INFINITY;
        }
        let n = self.prob.n() as f64;
        (0.5 * (t.quad - self.prob.gamma()) * x * x - t.lin * x) / n
    }

    fn prox_block(&self, block: usize, center: &[f64], weight: f64, out: &mut [f64]) {
        let t = self.prob.dual_term(block);
        out[0] = t.prox(center[0], weight, self.prob.n() as f64, self.prob.gamma());
    }
}

impl ErmProblem {
    /// `−D = f + Ψ` with the strong convexity of the conjugates moved into `f`.
    pub fn relocated(&self) -> CompositeProblem<DualSmooth<'_>, DualRegularizer<'_>> {
        CompositeProblem::new(DualSmooth::new(self), DualRegularizer::new(self))
            .expect("ERM constants are positive and μ ∈ (0, 1]")
    }
}
