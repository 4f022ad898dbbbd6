//! Diagnostic suite: schedule properties, convex-combination structure, equivalence of
//! the explicit and efficient forms, the ERM gap bound and the expected-rate envelope.

use apcg_core::apcg::{solve_alpha, AlphaRule};
use apcg_core::diagnostics::{
    check_schedule_grid, corrupted_alpha, equivalence_deviation, lemma4_margins,
    prox_gradient_reference, rate_envelope, theta_margins, CheckOutcome,
};
use apcg_core::erm::{ErmProblem, Loss};
use apcg_core::regularizers::L1Norm;
use apcg_core::synth::{random_quadratic, synth_binary, SynthSpec};
use apcg_core::{BlockPartition, CompositeProblem};

use crate::error::{CliError, Result};

pub const MAX_BLOCKS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    /// Blocks of the lasso instance used by the iterate checks.
    pub blocks: usize,
    pub seed: u64,
    /// Seeds averaged by the envelope check.
    pub envelope_seeds: usize,
    pub envelope_epochs: usize,
    /// Scales every α root by `1 + 1e-6`; the schedule check must then fail.
    pub corrupt_alpha: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            blocks: 10,
            seed: 7,
            envelope_seeds: 2000,
            envelope_epochs: 40,
            corrupt_alpha: false,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 || self.blocks > MAX_BLOCKS {
            return Err(CliError::Config(format!(
                "blocks must lie in 1..={MAX_BLOCKS}, got {}",
                self.blocks
            )));
        }
        if self.envelope_seeds == 0 {
            return Err(CliError::Config(
                "at least one envelope seed is required".into(),
            ));
        }
        Ok(())
    }
}

pub const SCHEDULE_TOL: f64 = 1e-12;
pub const THETA_TOL: f64 = 1e-12;
pub const COMBINATION_TOL: f64 = 1e-8;
pub const PSI_TOL: f64 = 1e-10;
pub const EQUIVALENCE_TOL: f64 = 1e-8;
pub const GAP_TOL: f64 = 1e-10;
pub const ENVELOPE_RATIO: f64 = 1.2;

fn outcome(name: &str, passed: bool, worst: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        worst,
        detail,
    }
}

/// Runs every check; `progress` sees each outcome as soon as it is known.
pub fn check_invariants(
    cfg: &CheckConfig,
    mut progress: impl FnMut(&CheckOutcome),
) -> Result<Vec<CheckOutcome>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let mut push = |c: CheckOutcome| {
        progress(&c);
        out.push(c);
    };

    let rule: AlphaRule = if cfg.corrupt_alpha {
        corrupted_alpha
    } else {
        solve_alpha
    };
    push(check_schedule_grid(
        &[1, 2, 10, 1000],
        &[0.0, 1e-6, 0.01, 1.0],
        10_000,
        SCHEDULE_TOL,
        rule,
    )?);

    let n = cfg.blocks;
    let q = random_quadratic(&BlockPartition::scalar(n), 0.5, cfg.seed);
    let lipschitz_full = q.full_lipschitz_bound();
    let lasso = CompositeProblem::new(q, L1Norm::new(0.1))?;
    let x0 = vec![1.0; n];

    let iters = 20 * n.min(50);
    let t = theta_margins(&lasso, &x0, 1.0, iters, cfg.seed)?;
    let worst = t.sum.max(t.negativity).max(t.combination).max(t.psi_excess);
    push(outcome(
        "theta",
        t.sum <= THETA_TOL && t.negativity <= THETA_TOL && t.combination <= COMBINATION_TOL && t.psi_excess <= PSI_TOL,
        worst,
        format!(
            "|Σθ−1| {:.2e}, min θ margin {:.2e}, ‖x−Σθz‖∞ {:.2e}, Ψ(x)−Ψ̂ {:.2e} over {iters} iterations",
            t.sum, t.negativity, t.combination, t.psi_excess
        ),
    ));

    let dev = (0..3u64)
        .map(|s| equivalence_deviation(&lasso, &x0, 500, cfg.seed + s))
        .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
    push(outcome(
        "equivalence",
        dev <= EQUIVALENCE_TOL,
        dev,
        format!("max deviation {dev:.2e} over 3 seeds × 500 iterations"),
    ));

    let spec = SynthSpec {
        n: 200,
        d: 50,
        density: 0.2,
        seed: cfg.seed,
        ..SynthSpec::default()
    };
    let (a, b) = synth_binary(&spec)?;
    let mut min_gap = f64::INFINITY;
    let mut max_excess = f64::NEG_INFINITY;
    for (loss, lambda, gamma) in [
        (Loss::SmoothedHinge, 1e-3, 1.0),
        (Loss::SmoothedHinge, 1e-5, 0.5),
        (
            Loss::Square {
                targets: vec![1.0; spec.n],
            },
            1e-3,
            1.0,
        ),
    ] {
        let p = ErmProblem::from_labeled(a.clone(), &b, loss, lambda, gamma)?;
        let m = lemma4_margins(&p, 30, cfg.seed)?;
        min_gap = min_gap.min(m.min_gap);
        max_excess = max_excess.max(m.max_bound_excess);
    }
    push(outcome(
        "gap-bound",
        min_gap >= -GAP_TOL && max_excess <= GAP_TOL,
        max_excess.max(-min_gap),
        format!("min gap {min_gap:.2e}, max gap − bound {max_excess:.2e} over 3 runs × 30 epochs"),
    ));

    let x_star = prox_gradient_reference(&lasso, &x0, lipschitz_full, 1_000_000);
    let seeds: Vec<u64> = (0..cfg.envelope_seeds as u64).collect();
    let env = rate_envelope(&lasso, &x0, &x_star, 1.0, cfg.envelope_epochs, &seeds)?;
    let ratio = env.max_ratio();
    push(outcome(
        "envelope",
        ratio <= ENVELOPE_RATIO,
        ratio,
        format!(
            "max mean excess / bound {ratio:.3} over {} seeds × {} epochs",
            seeds.len(),
            cfg.envelope_epochs
        ),
    ));

    Ok(out)
}
