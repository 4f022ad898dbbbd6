//! Runtime checks of the schedule, the convex-combination structure of the iterates, the
//! equivalence of the explicit and change-of-variables forms, the ERM gap bound and the
//! expected-rate envelope. Each check reports the worst margin it observed.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::apcg::{
    solve_alpha, AlphaRule, ApcgSchedule, EfficientState, ExplicitState, ThetaTracker,
};
use crate::erm::{ErmDualState, ErmProblem};
use crate::math::{max_abs_diff, sqrt};
use crate::{BlockSampler, CompositeProblem, Result, SeparableRegularizer, SmoothOracle};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity (see `detail`).
    pub worst: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, worst: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            worst,
            detail,
        }
    }
}

/// Worst relative violations of the schedule properties over `steps` steps.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScheduleMargins {
    /// `√μ/n ≤ α_k ≤ 1/n` and `μ ≤ γ_k ≤ 1`.
    pub bounds: f64,
    /// `α_{k+1} ≤ α_k`, `γ_{k+1} ≤ γ_k`.
    pub monotone: f64,
    /// `|γ_{k+1} − n²α_k²| / γ_{k+1}`.
    pub identity: f64,
    /// `λ_k / min{(1 − √μ/n)^k, (2n/(2n + k√γ_0))²} − 1`; below the normal range the
    /// logarithms are compared instead, relative to the log of the bound.
    pub lambda: f64,
}

impl ScheduleMargins {
    pub fn worst(&self) -> f64 {
        self.bounds
            .max(self.monotone)
            .max(self.identity)
            .max(self.lambda)
    }
}

fn rel_excess(value: f64, limit: f64) -> f64 {
    if value <= limit {
        0.0
    } else {
        (value - limit) / limit.abs().max(f64::MIN_POSITIVE)
    }
}

/// Runs the schedule with `rule` and measures how far it strays from the properties that
/// hold for the exact root.
pub fn schedule_margins(
    n: usize,
    mu: f64,
    gamma0: f64,
    steps: usize,
    rule: AlphaRule,
) -> Result<ScheduleMargins> {
    let mut s = ApcgSchedule::new(n, mu, gamma0)?.with_alpha_rule(rule);
    let nf = n as f64;
    let lo = sqrt(mu) / nf;
    let mut m = ScheduleMargins::default();
    let mut prev: Option<(f64, f64)> = None;
    let mut ln_lam = 0.0;
    for k in 0..steps {
        let lam = s.lambda();
        let bound = ApcgSchedule::lambda_bound(n, mu, gamma0, k);
        let excess = if bound >= f64::MIN_POSITIVE {
            if lam <= bound {
                0.0
            } else {
                lam / bound - 1.0
            }
        } else if ln_lam == f64::NEG_INFINITY {
            0.0
        } else {
            let ln_bound = ln_lambda_bound(n, mu, gamma0, k);
            ((ln_lam - ln_bound) / ln_bound.abs()).max(0.0)
        };
        m.lambda = m.lambda.max(excess);
        let st = s.step()?;
        ln_lam += libm::log1p(-st.alpha);
        m.bounds = m
            .bounds
            .max(rel_excess(lo, st.alpha))
            .max(rel_excess(st.alpha, 1.0 / nf))
            .max(rel_excess(mu, st.gamma))
            .max(rel_excess(st.gamma, 1.0));
        if let Some((a, g)) = prev {
            m.monotone = m
                .monotone
                .max(rel_excess(st.alpha, a))
                .max(rel_excess(st.gamma, g));
        }
        prev = Some((st.alpha, st.gamma));
        let id = (st.gamma_next - nf * nf * st.alpha * st.alpha).abs() / st.gamma_next;
        m.identity = m.identity.max(id);
    }
    Ok(m)
}

/// Logarithm of `ApcgSchedule::lambda_bound`, finite where the bound itself underflows.
fn ln_lambda_bound(n: usize, mu: f64, gamma0: f64, k: usize) -> f64 {
    let nf = n as f64;
    let kf = k as f64;
    let linear = if k == 0 {
        0.0
    } else {
        kf * libm::log1p(-sqrt(mu) / nf)
    };
    let sublinear = 2.0 * libm::log(2.0 * nf / (2.0 * nf + kf * sqrt(gamma0)));
    linear.min(sublinear)
}

/// Schedule properties over the grid `n × μ × γ_0`, with relative tolerance `tol`.
pub fn check_schedule_grid(
    ns: &[usize],
    mus: &[f64],
    steps: usize,
    tol: f64,
    rule: AlphaRule,
) -> Result<CheckOutcome> {
    let mut worst = ScheduleMargins::default();
    let mut at = String::new();
    for &n in ns {
        for &mu in mus {
            for g0 in [mu.max(0.1), 1.0] {
                let m = schedule_margins(n, mu, g0, steps, rule)?;
                if m.worst() > worst.worst() || at.is_empty() {
                    at = format!("n={n} μ={mu} γ0={g0}");
                }
                worst.bounds = worst.bounds.max(m.bounds);
                worst.monotone = worst.monotone.max(m.monotone);
                worst.identity = worst.identity.max(m.identity);
                worst.lambda = worst.lambda.max(m.lambda);
            }
        }
    }
    let detail = format!(
        "bounds {:.2e}, monotone {:.2e}, γ=n²α² {:.2e}, λ bound {:.2e} (worst at {at})",
        worst.bounds, worst.monotone, worst.identity, worst.lambda
    );
    Ok(CheckOutcome::new(
        "schedule",
        worst.worst() <= tol,
        worst.worst(),
        detail,
    ))
}

/// Worst deviations of the convex-combination structure along one run of the general
/// method.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ThetaMargins {
    /// `|Σ_l θ_l − 1|`.
    pub sum: f64,
    /// `max(−θ_l, 0)`.
    pub negativity: f64,
    /// `‖x^{(k)} − Σ_l θ_l z^{(l)}‖_∞`.
    pub combination: f64,
    /// `Ψ(x^{(k)}) − Ψ̂_k`.
    pub psi_excess: f64,
}

pub fn theta_margins<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    gamma0: f64,
    iters: usize,
    seed: u64,
) -> Result<ThetaMargins> {
    let n = problem.num_blocks();
    let part = problem.partition();
    let psi = |x: &[f64]| problem.regularizer().eval(part, x);
    let mut state = ExplicitState::new(problem, x0)?;
    let mut sched = ApcgSchedule::new(n, problem.mu(), gamma0)?.with_history();
    let mut sampler = BlockSampler::new(seed);
    let mut tracker = ThetaTracker::new(n, problem.mu(), psi(x0));
    let mut zs: Vec<Vec<f64>> = vec![x0.to_vec()];
    let mut m = ThetaMargins::default();
    let mut comb = vec![0.0; x0.len()];
    for _ in 0..iters {
        state.step_general(problem, &mut sched, &mut sampler)?;
        let step = *sched
            .history()
            .and_then(|h| h.last())
            .expect("history is recorded");
        tracker.advance(&step, psi(state.z()));
        zs.push(state.z().to_vec());
        let th = tracker.theta();
        m.sum = m.sum.max((th.iter().sum::<f64>() - 1.0).abs());
        m.negativity = m.negativity.max(th.iter().fold(0.0f64, |a, &t| a.max(-t)));
        comb.iter_mut().for_each(|c| *c = 0.0);
        for (t, z) in th.iter().zip(&zs) {
            for (c, zj) in comb.iter_mut().zip(z) {
                *c += t * zj;
            }
        }
        m.combination = m.combination.max(max_abs_diff(&comb, state.x()));
        m.psi_excess = m.psi_excess.max(psi(state.x()) - tracker.psi_hat());
    }
    Ok(m)
}

/// `max_k ‖x_explicit − x_efficient‖_∞` (and likewise for `y`, `z`) between the explicit
/// strongly convex method and its change-of-variables form under a shared seed.
pub fn equivalence_deviation<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    iters: usize,
    seed: u64,
) -> Result<f64> {
    let mut eff = EfficientState::new(problem, x0)?;
    let mut exp = ExplicitState::new(problem, x0)?;
    let alpha = eff.alpha();
    let mut sa = BlockSampler::new(seed);
    let mut sb = BlockSampler::new(seed);
    let mut buf = vec![0.0; x0.len()];
    let mut worst = 0.0f64;
    let mut y_used = vec![0.0; x0.len()];
    for _ in 0..iters {
        eff.y_into(&mut y_used);
        let i = eff.step(problem, &mut sa);
        let j = exp.step_sc(problem, alpha, &mut sb)?;
        debug_assert_eq!(i, j);
        worst = worst.max(max_abs_diff(&y_used, exp.y()));
        eff.x_into(&mut buf);
        worst = worst.max(max_abs_diff(&buf, exp.x()));
        eff.z_into(&mut buf);
        worst = worst.max(max_abs_diff(&buf, exp.z()));
    }
    Ok(worst)
}

/// Gap bookkeeping of an APCG run on an ERM dual: the smallest gap (weak duality asks for
/// `≥ 0`) and the largest `gap − n/(2γ)‖D′‖²` (the gap bound asks for `≤ 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMargins {
    pub min_gap: f64,
    pub max_bound_excess: f64,
    pub epochs: usize,
}

pub fn lemma4_margins(prob: &ErmProblem, epochs: usize, seed: u64) -> Result<GapMargins> {
    let mut s = ErmDualState::new(prob);
    let mut sampler = BlockSampler::new(seed);
    let mut m = GapMargins {
        min_gap: f64::INFINITY,
        max_bound_excess: f64::NEG_INFINITY,
        epochs,
    };
    for e in 0..=epochs {
        if e > 0 {
            for _ in 0..prob.n() {
                s.step(prob, &mut sampler)?;
            }
        }
        let r = prob.report(&s.x(), e)?;
        m.min_gap = m.min_gap.min(r.gap);
        m.max_bound_excess = m.max_bound_excess.max(r.gap - r.lemma4_bound);
    }
    Ok(m)
}

/// Proximal gradient with constant step `1/lipschitz_full`, where `lipschitz_full` bounds
/// the Lipschitz constant of `∇f`.
pub fn prox_gradient_reference<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    lipschitz_full: f64,
    iters: usize,
) -> Vec<f64> {
    let mut x = x0.to_vec();
    let mut g = vec![0.0; x.len()];
    let mut c = vec![0.0; x.len()];
    for _ in 0..iters {
        problem.smooth().gradient(&x, &mut g);
        for j in 0..x.len() {
            c[j] = x[j] - g[j] / lipschitz_full;
        }
        problem
            .regularizer()
            .prox(problem.partition(), &c, lipschitz_full, &mut x);
    }
    x
}

/// Expected-rate envelope: the seed-averaged `F(x^{(k)}) − F*` against
/// `min{(1 − √μ/n)^k, (2n/(2n + k√γ_0))²} (F(x0) − F* + γ_0/2 ‖x0 − x*‖_L²)` at every epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    /// `(k, mean F(x^{(k)}) − F*, bound)` per epoch.
    pub points: Vec<(usize, f64, f64)>,
}

impl Envelope {
    /// Largest ratio of the mean excess to the bound, ignoring epochs with a zero bound.
    pub fn max_ratio(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| p.2 > 0.0)
            .map(|p| p.1 / p.2)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn rate_envelope<F: SmoothOracle, R: SeparableRegularizer>(
    problem: &CompositeProblem<F, R>,
    x0: &[f64],
    x_star: &[f64],
    gamma0: f64,
    epochs: usize,
    seeds: &[u64],
) -> Result<Envelope> {
    let n = problem.num_blocks();
    let mu = problem.mu();
    let f_star = problem.objective(x_star);
    let r0 = problem.distance_l(x0, x_star);
    let c = problem.objective(x0) - f_star + 0.5 * gamma0 * r0 * r0;
    let mut sums = vec![0.0; epochs + 1];
    for &seed in seeds {
        let mut st = ExplicitState::new(problem, x0)?;
        let mut sched = ApcgSchedule::new(n, mu, gamma0)?;
        let mut sampler = BlockSampler::new(seed);
        sums[0] += problem.objective(st.x()) - f_star;
        for sum in sums.iter_mut().skip(1) {
            for _ in 0..n {
                st.step_general(problem, &mut sched, &mut sampler)?;
            }
            *sum += problem.objective(st.x()) - f_star;
        }
    }
    let count = seeds.len() as f64;
    let points = sums
        .iter()
        .enumerate()
        .map(|(e, s)| {
            (
                e * n,
                s / count,
                ApcgSchedule::lambda_bound(n, mu, gamma0, e * n) * c,
            )
        })
        .collect();
    Ok(Envelope { points })
}

/// `solve_alpha` scaled by `1 + 1e-6`: a negative control for the schedule checks.
pub fn corrupted_alpha(gamma: f64, mu: f64, n: usize) -> Result<f64> {
    solve_alpha(gamma, mu, n).map(|a| a * (1.0 + 1e-6))
}
