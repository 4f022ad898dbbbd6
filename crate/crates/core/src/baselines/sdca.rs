use alloc::vec;
use alloc::vec::Vec;

use crate::erm::ErmProblem;
use crate::BlockSampler;

/// Dual coordinate ascent with exact coordinate maximization, keeping `w = Ax/(λn)`.
#[derive(Debug, Clone)]
pub struct SdcaState {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl SdcaState {
    /// Starts from `x = 0`, `w = 0`.
    pub fn new(prob: &ErmProblem) -> Self {
        Self {
            x: vec![0.0; prob.n()],
            w: vec![0.0; prob.d()],
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Maximizes `D` over coordinate `i` with the others fixed.
    pub fn step_at(&mut self, prob: &ErmProblem, i: usize) {
        let n = prob.n() as f64;
        let s = prob.col_norm_sq()[i] / (prob.lambda() * n);
        let t = prob.dual_term(i);
        let margin = prob.matrix().col_dot(i, &self.w);
        let xi = self.x[i];
        let denom = t.quad + s;
        let next = if denom > 0.0 {
            (xi + (t.lin - t.quad * xi - margin) / denom).clamp(t.lo, t.hi)
        } else {
            xi
        };
        let delta = next - xi;
        if delta != 0.0 {
            self.x[i] = next;
            prob.matrix()
                .col_axpy(i, delta / (prob.lambda() * n), &mut self.w);
        }
    }
}

/// `n` uniformly sampled coordinate steps.
pub fn sdca_epoch(prob: &ErmProblem, state: &mut SdcaState, sampler: &mut BlockSampler) {
    for _ in 0..prob.n() {
        let i = sampler.next_block(prob.n());
        state.step_at(prob, i);
    }
}
