use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::problem::ErmProblem;
use crate::apcg::LazyScaled;
use crate::math::sqrt;
use crate::{BlockSampler, Error, Result};

/// Iterations between aggregate recomputation checks in debug builds.
const CONSISTENCY_PERIOD: usize = 4096;

/// State of APCG applied to the ERM dual with sparse primal-space aggregates.
///
/// Besides `ū = ρ^{k+1}u` and `v` it keeps `p̄ = Aū` and `q = Av`, so that a step touches
/// one coordinate of the dual vectors and one sparse column of `A`.
#[derive(Debug, Clone)]
pub struct ErmDualState {
    u_bar: LazyScaled,
    v: Vec<f64>,
    p_bar: LazyScaled,
    q: Vec<f64>,
    alpha: f64,
    rho: f64,
    nalpha: f64,
    k: usize,
}

impl ErmDualState {
    /// Starts from `x0 = 0`.
    pub fn new(prob: &ErmProblem) -> Self {
        let n = prob.n();
        let mu = prob.constants().mu;
        let alpha = sqrt(mu) / n as f64;
        let rho = (1.0 - alpha) / (1.0 + alpha);
        let table = crate::apcg::lazy_pow_table_len(n);
        Self {
            u_bar: LazyScaled::zeros(n, rho, table),
            v: vec![0.0; n],
            p_bar: LazyScaled::zeros(prob.d(), rho, table),
            q: vec![0.0; prob.d()],
            alpha,
            rho,
            nalpha: n as f64 * alpha,
            k: 0,
        }
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

    pub fn step(&mut self, prob: &ErmProblem, sampler: &mut BlockSampler) -> Result<usize> {
        let i = sampler.next_block(prob.n());
        self.step_at(prob, i)?;
        Ok(i)
    }

    /// One coordinate update on example `i`; returns the increment `h`.
    pub fn step_at(&mut self, prob: &ErmProblem, i: usize) -> Result<f64> {
        let n = prob.n() as f64;
        let lambda = prob.lambda();
        let gamma = prob.gamma();
        let (rows, vals) = prob.matrix().col(i);
        let mut margin = 0.0;
        for (&r, &a) in rows.iter().zip(vals) {
            margin += a * (self.p_bar.get(r) + self.q[r]);
        }
        let ui = self.u_bar.get(i);
        let grad = margin / (lambda * n * n) + gamma / n * (ui + self.v[i]);
        let c = self.alpha * (prob.col_norm_sq()[i] + lambda * gamma * n) / (lambda * n);
        let t0 = self.v[i] - ui;
        let h = prob.dual_term(i).prox(t0 - grad / c, c, n, gamma) - t0;

        let cu = 0.5 * (1.0 - self.nalpha) * h;
        let cv = 0.5 * (1.0 + self.nalpha) * h;
        self.u_bar.set_next(i, self.rho * (ui - cu));
        self.v[i] += cv;
        for (&r, &a) in rows.iter().zip(vals) {
            let p = self.p_bar.get(r);
            self.p_bar.set_next(r, self.rho * (p - cu * a));
            self.q[r] += cv * a;
        }
        self.u_bar.tick();
        self.p_bar.tick();
        self.k += 1;
        if cfg!(debug_assertions) && self.k % CONSISTENCY_PERIOD == 0 {
            let drift = self.aggregate_drift(prob);
            if drift > 1e-8 {
                return Err(Error::Invariant(format!(
                    "aggregates drifted from A·ū, A·v by {drift:e} after {} steps",
                    self.k
                )));
            }
        }
        Ok(h)
    }

    /// `x = ū/ρ + v`.
    pub fn x(&self) -> Vec<f64> {
        (0..self.v.len())
            .map(|j| self.u_bar.get(j) / self.rho + self.v[j])
            .collect()
    }

    /// `y = ū + v`.
    pub fn y(&self) -> Vec<f64> {
        (0..self.v.len())
            .map(|j| self.u_bar.get(j) + self.v[j])
            .collect()
    }

    /// `z = −ū/ρ + v`.
    pub fn z(&self) -> Vec<f64> {
        (0..self.v.len())
            .map(|j| self.v[j] - self.u_bar.get(j) / self.rho)
            .collect()
    }

    /// `w = (p̄/ρ + q)/(λn)`.
    pub fn w(&self, prob: &ErmProblem) -> Vec<f64> {
        let s = 1.0 / (prob.lambda() * prob.n() as f64);
        (0..self.q.len())
            .map(|r| (self.p_bar.get(r) / self.rho + self.q[r]) * s)
            .collect()
    }

    /// Largest deviation of `(p̄, q)` from a fresh `(Aū, Av)`, relative to the larger of
    /// the two aggregates' magnitudes (and 1).
    pub fn aggregate_drift(&self, prob: &ErmProblem) -> f64 {
        let a = prob.matrix();
        let mut p = vec![0.0; prob.d()];
        let mut q = vec![0.0; prob.d()];
        a.matvec(&self.u_bar.to_vec(), &mut p);
        a.matvec(&self.v, &mut q);
        let scale = p.iter().chain(&q).fold(1.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for r in 0..prob.d() {
            worst = worst.max((p[r] - self.p_bar.get(r)).abs());
            worst = worst.max((q[r] - self.q[r]).abs());
        }
        worst / scale
    }
}
