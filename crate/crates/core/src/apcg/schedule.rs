use alloc::format;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::{Error, Result};

/// Rule producing `α_k` from `(γ_k, μ, n)`. [`solve_alpha`] is the only correct one; the
/// indirection lets diagnostics run the schedule with a perturbed root.
pub type AlphaRule = fn(gamma: f64, mu: f64, n: usize) -> Result<f64>;

/// Root in `(0, 1/n]` of `n²α² = (1 − α)γ + αμ`.
///
/// Uses `α = 2γ / ((γ − μ) + √((γ − μ)² + 4n²γ))`, which has no cancellation for `γ ≥ μ`.
pub fn solve_alpha(gamma: f64, mu: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("block count must be positive".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "γ_k must lie in (0, 1], got {gamma}"
        )));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidInput(format!(
            "μ must lie in [0, 1], got {mu}"
        )));
    }
    let n2 = (n as f64) * (n as f64);
    let d = gamma - mu;
    let disc = sqrt(d * d + 4.0 * n2 * gamma);
    let alpha = if d >= 0.0 {
        2.0 * gamma / (d + disc)
    } else {
        (disc - d) / (2.0 * n2)
    };
    let cap = 1.0 / n as f64;
    if !(alpha > 0.0) || alpha > cap * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Invariant(format!(
            "α root {alpha} outside (0, 1/n] for γ={gamma}, μ={mu}, n={n}"
        )));
    }
    Ok(alpha.min(cap))
}

/// One schedule step: `α_k`, `γ_k`, `γ_{k+1} = (1 − α_k)γ_k + α_kμ` and
/// `β_k = α_kμ / γ_{k+1}`, together with `λ_k = Π_{i<k}(1 − α_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleStep {
    pub alpha: f64,
    pub gamma: f64,
    pub gamma_next: f64,
    pub beta: f64,
    pub lambda: f64,
}

/// The `α_k, γ_k, β_k, λ_k` sequences of the general method.
#[derive(Debug, Clone)]
pub struct ApcgSchedule {
    n: usize,
    mu: f64,
    gamma0: f64,
    gamma: f64,
    lambda: f64,
    k: usize,
    rule: AlphaRule,
    history: Option<Vec<ScheduleStep>>,
}

impl ApcgSchedule {
    /// Requires `0 < γ_0 ≤ 1`, `0 ≤ μ ≤ γ_0`.
    pub fn new(n: usize, mu: f64, gamma0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("block count must be positive".into()));
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Config(format!("μ must lie in [0, 1], got {mu}")));
        }
        if !(gamma0 > 0.0 && gamma0 <= 1.0 && gamma0 >= mu) {
            return Err(Error::Config(format!(
                "γ_0 must lie in [μ, 1] and be positive, got {gamma0}"
            )));
        }
        Ok(Self {
            n,
            mu,
            gamma0,
            gamma: gamma0,
            lambda: 1.0,
            k: 0,
            rule: solve_alpha,
            history: None,
        })
    }

    /// Records every step so that [`history`](Self::history) and θ coefficients are available.
    pub fn with_history(mut self) -> Self {
        self.history = Some(Vec::new());
        self
    }

    pub fn with_alpha_rule(mut self, rule: AlphaRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn step(&mut self) -> Result<ScheduleStep> {
        let alpha = (self.rule)(self.gamma, self.mu, self.n)?;
        let gamma_next = (1.0 - alpha) * self.gamma + alpha * self.mu;
        let s = ScheduleStep {
            alpha,
            gamma: self.gamma,
            gamma_next,
            beta: alpha * self.mu / gamma_next,
            lambda: self.lambda,
        };
        self.gamma = gamma_next;
        self.lambda *= 1.0 - alpha;
        self.k += 1;
        if let Some(h) = self.history.as_mut() {
            h.push(s);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    /// Current `γ_k`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Current `λ_k`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Steps taken so far.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn history(&self) -> Option<&[ScheduleStep]> {
        self.history.as_deref()
    }

    /// `min{(1 − √μ/n)^k, (2n / (2n + k√γ_0))²}`.
    pub fn lambda_bound(n: usize, mu: f64, gamma0: f64, k: usize) -> f64 {
        let nf = n as f64;
        let linear = crate::math::powf(1.0 - sqrt(mu) / nf, k as f64);
        let r = 2.0 * nf / (2.0 * nf + k as f64 * sqrt(gamma0));
        linear.min(r * r)
    }
}
