use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::schedule::{ApcgSchedule, ScheduleStep};
use crate::{Error, Result};

/// Coefficients `θ^{(k)}` with `x^{(k)} = Σ_l θ_l z^{(l)}`, and the upper bound
/// `Ψ̂_k = Σ_l θ_l Ψ(z^{(l)})` on `Ψ(x^{(k)})`.
#[derive(Debug, Clone)]
pub struct ThetaTracker {
    n: f64,
    mu: f64,
    theta: Vec<f64>,
    psi: Vec<f64>,
    prev_alpha: Option<f64>,
}

impl ThetaTracker {
    /// `θ^{(0)} = (1)`; `psi_z0 = Ψ(z^{(0)})`.
    pub fn new(n: usize, mu: f64, psi_z0: f64) -> Self {
        Self {
            n: n as f64,
            mu,
            theta: vec![1.0],
            psi: vec![psi_z0],
            prev_alpha: None,
        }
    }

    /// Moves from `θ^{(k)}` to `θ^{(k+1)}` given step `k` of the schedule and
    /// `Ψ(z^{(k+1)})`.
    pub fn advance(&mut self, step: &ScheduleStep, psi_z_next: f64) {
        let n = self.n;
        let a = step.alpha;
        match self.prev_alpha {
            None => {
                self.theta[0] = 1.0 - n * a;
            }
            Some(ap) => {
                let ag = a * step.gamma;
                let d = ag + step.gamma_next;
                let shrink = (1.0 - self.mu / n) * step.gamma_next / d;
                let k = self.theta.len() - 1;
                for t in &mut self.theta[..k] {
                    *t *= shrink;
                }
                self.theta[k] = (1.0 - self.mu / n) * (ag + n * ap * step.gamma_next) / d
                    - (1.0 - a) * step.gamma / (n * a);
            }
        }
        self.theta.push(n * a);
        self.psi.push(psi_z_next);
        self.prev_alpha = Some(a);
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn psi_hat(&self) -> f64 {
        self.theta.iter().zip(&self.psi).map(|(t, p)| t * p).sum()
    }
}

/// `θ^{(k)}` from the first `k` recorded schedule steps.
pub fn theta_coefficients(schedule: &ApcgSchedule, k: usize) -> Result<Vec<f64>> {
    let h = schedule
        .history()
        .ok_or_else(|| Error::Config("schedule was built without history".into()))?;
    if h.len() < k {
        return Err(Error::InvalidInput(format!(
            "schedule has {} recorded steps, {k} requested",
            h.len()
        )));
    }
    let mut t = ThetaTracker::new(schedule.n(), schedule.mu(), 0.0);
    for s in &h[..k] {
        t.advance(s, 0.0);
    }
    Ok(t.theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_is_a_convex_combination() {
        for &(n, mu, g0) in &[
            (1, 0.0, 1.0),
            (3, 0.1, 0.5),
            (10, 0.0, 0.2),
            (50, 0.01, 1.0),
        ] {
            let mut s = ApcgSchedule::new(n, mu, g0).unwrap().with_history();
            for _ in 0..200 {
                s.step().unwrap();
            }
            for k in [0, 1, 2, 17, 200] {
                let th = theta_coefficients(&s, k).unwrap();
                assert_eq!(th.len(), k + 1);
                let sum: f64 = th.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
                assert!(th.iter().all(|&t| t >= -1e-15));
            }
        }
    }

    #[test]
    fn first_coefficients() {
        let mut s = ApcgSchedule::new(4, 0.0, 1.0).unwrap().with_history();
        let a0 = s.step().unwrap().alpha;
        let th = theta_coefficients(&s, 1).unwrap();
        assert_eq!(th, vec![1.0 - 4.0 * a0, 4.0 * a0]);
    }
}
