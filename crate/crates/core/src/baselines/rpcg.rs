use alloc::vec;
use alloc::vec::Vec;

use crate::erm::ErmProblem;
use crate::{BlockSampler, CompositeProblem, SeparableRegularizer, SmoothOracle};

/// One randomized proximal coordinate gradient step:
/// `x_i ← prox(x_i − ∇_i f(x)/L_i, L_i)` on a uniformly drawn block. Returns the block.
pub fn rpcg_step<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x: &mut [f64],
    sampler: &mut BlockSampler,
) -> usize {
    let i = sampler.next_block(problem.num_blocks());
    rpcg_step_at(problem, x, i);
    i
}

pub fn rpcg_step_at<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x: &mut [f64],
    block: usize,
) {
    let r = problem.partition().range(block);
    let mut g = vec![0.0; r.len()];
    problem.smooth().partial_gradient(x, block, &mut g);
    let l = problem.lipschitz()[block];
    let center: Vec<f64> = r.clone().zip(&g).map(|(j, gj)| x[j] - gj / l).collect();
    problem
        .regularizer()
        .prox_block(block, &center, l, &mut x[r]);
}

/// Coordinate gradient on the relocated ERM dual, keeping `w = Ax/(λn)` so a step costs
/// `O(nnz(A_i))`.
#[derive(Debug, Clone)]
pub struct ErmRpcgState {
    x: Vec<f64>,
    w: Vec<f64>,
    lipschitz: Vec<f64>,
}

impl ErmRpcgState {
    pub fn new(prob: &ErmProblem) -> Self {
        Self {
            x: vec![0.0; prob.n()],
            w: vec![0.0; prob.d()],
            lipschitz: prob.constants().lipschitz,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn step_at(&mut self, prob: &ErmProblem, i: usize) {
        let n = prob.n() as f64;
        let g = prob.gamma();
        let grad = prob.matrix().col_dot(i, &self.w) / n + g / n * self.x[i];
        let l = self.lipschitz[i];
        let next = prob.dual_term(i).prox(self.x[i] - grad / l, l, n, g);
        let delta = next - self.x[i];
        if delta != 0.0 {
            self.x[i] = next;
            prob.matrix()
                .col_axpy(i, delta / (prob.lambda() * n), &mut self.w);
        }
    }

    pub fn epoch(&mut self, prob: &ErmProblem, sampler: &mut BlockSampler) {
        for _ in 0..prob.n() {
            let i = sampler.next_block(prob.n());
            self.step_at(prob, i);
        }
    }
}
