use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::check_len;
use crate::math::sqrt;
use crate::{CompositeProblem, Error, Result, SeparableRegularizer, SmoothOracle};

/// Backtracking parameters of the accelerated full gradient method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfgConfig {
    /// First trial step; defaults to `1/Σ_i L_i`.
    pub initial_step: Option<f64>,
    /// Step shrink factor on a failed upper-bound test, in `(0, 1)`.
    pub backtrack: f64,
    /// Step growth factor after an accepted step, `≥ 1`.
    pub grow: f64,
    pub max_backtracks: usize,
}

impl Default for AfgConfig {
    fn default() -> Self {
        Self {
            initial_step: None,
            backtrack: 0.5,
            grow: 2.0,
            max_backtracks: 100,
        }
    }
}

impl AfgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::Config(format!(
                "backtracking factor must lie in (0, 1), got {}",
                self.backtrack
            )));
        }
        if !(self.grow >= 1.0 && self.grow.is_finite()) {
            return Err(Error::Config(format!(
                "step growth must be ≥ 1, got {}",
                self.grow
            )));
        }
        if let Some(t) = self.initial_step {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!(
                    "initial step must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Accelerated proximal full gradient with backtracking on the quadratic upper bound.
///
/// With a Euclidean strong convexity modulus `σ` the momentum is
/// `(1 − √(σt))/(1 + √(σt))` for the current step `t`; without one it follows the
/// `θ_{k+1} = (1 + √(1 + 4θ_k²))/2` sequence.
#[derive(Debug, Clone)]
pub struct AfgState {
    x: Vec<f64>,
    x_prev: Vec<f64>,
    y: Vec<f64>,
    grad: Vec<f64>,
    center: Vec<f64>,
    cand: Vec<f64>,
    step: f64,
    theta: f64,
    sigma: Option<f64>,
    cfg: AfgConfig,
    k: usize,
    backtracks: usize,
}

impl AfgState {
    pub fn new<F: SmoothOracle, R: SeparableRegularizer>(
        problem: &CompositeProblem<F, R>,
        x0: &[f64],
        sigma: Option<f64>,
        cfg: AfgConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        check_len(problem.dim(), x0.len())?;
        if let Some(s) = sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Config("strong convexity modulus must be ≥ 0".into()));
            }
        }
        let lsum: f64 = problem.lipschitz().iter().sum();
        let step = cfg.initial_step.unwrap_or(1.0 / lsum);
        let m = x0.len();
        Ok(Self {
            x: x0.to_vec(),
            x_prev: x0.to_vec(),
            y: vec![0.0; m],
            grad: vec![0.0; m],
            center: vec![0.0; m],
            cand: vec![0.0; m],
            step,
            theta: 1.0,
            sigma,
            cfg,
            k: 0,
            backtracks: 0,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn step_size(&self) -> f64 {
        self.step
    }

    pub fn iterations(&self) -> usize {
        self.k
    }

    /// Total rejected trial steps so far.
    pub fn backtracks(&self) -> usize {
        self.backtracks
    }

    pub fn step<F: SmoothOracle, R: SeparableRegularizer>(
        &mut self,
        problem: &CompositeProblem<F, R>,
    ) -> Result<()> {
        let beta = match self.sigma {
            Some(s) => {
                let q = sqrt((s * self.step).clamp(0.0, 1.0));
                (1.0 - q) / (1.0 + q)
            }
            None => {
                let next = 0.5 * (1.0 + sqrt(1.0 + 4.0 * self.theta * self.theta));
                let b = (self.theta - 1.0) / next;
                self.theta = next;
                b
            }
        };
        for j in 0..self.x.len() {
            self.y[j] = self.x[j] + beta * (self.x[j] - self.x_prev[j]);
        }
        let f = problem.smooth();
        f.gradient(&self.y, &mut self.grad);
        let fy = f.value(&self.y);
        let part = problem.partition();
        let mut tries = 0;
        loop {
            let t = self.step;
            for j in 0..self.y.len() {
                self.center[j] = self.y[j] - t * self.grad[j];
            }
            problem
                .regularizer()
                .prox(part, &self.center, 1.0 / t, &mut self.cand);
            let mut lin = 0.0;
            let mut sq = 0.0;
            for j in 0..self.y.len() {
                let d = self.cand[j] - self.y[j];
                lin += self.grad[j] * d;
                sq += d * d;
            }
            let upper = fy + lin + sq / (2.0 * t);
            let fc = f.value(&self.cand);
            if fc <= upper + 1e-15 * fy.abs().max(1.0) {
                break;
            }
            tries += 1;
            self.backtracks += 1;
            if tries > self.cfg.max_backtracks {
                return Err(Error::LineSearch(tries));
            }
            self.step *= self.cfg.backtrack;
        }
        core::mem::swap(&mut self.x_prev, &mut self.x);
        self.x.copy_from_slice(&self.cand);
        self.step *= self.cfg.grow;
        self.k += 1;
        Ok(())
    }
}
