mod common;

use apcg_core::apcg::{
    next_alpha_nsc, solve, theta_coefficients, ApcgSchedule, EfficientState, ExplicitState,
    SolveOptions, ThetaTracker, Variant,
};
use apcg_core::quadratic::DenseQuadratic;
use apcg_core::regularizers::{L1Norm, Zero};
use apcg_core::{BlockPartition, BlockSampler, CompositeProblem, SeparableRegularizer};
use common::*;

fn identity_quadratic(center: &[f64]) -> CompositeProblem<DenseQuadratic, Zero> {
    let n = center.len();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let f = DenseQuadratic::new(BlockPartition::scalar(n), q, center.to_vec()).unwrap();
    CompositeProblem::new(f, Zero).unwrap()
}

#[test]
fn two_block_identity_one_step_golden() {
    let p = identity_quadratic(&[0.0, 0.0]);
    assert_eq!(p.lipschitz(), &[1.0, 1.0]);
    assert!((p.mu() - 1.0).abs() < 1e-15);
    let mut st = ExplicitState::new(&p, &[1.0, 1.0]).unwrap();
    let mut sched = ApcgSchedule::new(2, p.mu(), 1.0).unwrap().with_history();
    st.step_general_at(&p, &mut sched, 1).unwrap();
    // α = 1/2, β = 1/2, y = (1, 1); the drawn block moves to z = 1 − 1/(nαL) = 0.
    let step = sched.history().unwrap()[0];
    assert!((step.alpha - 0.5).abs() < 1e-15 && (step.beta - 0.5).abs() < 1e-15);
    assert_eq!(st.y(), &[1.0, 1.0]);
    assert!(max_abs(st.z(), &[1.0, 0.0]) < 1e-15);
    assert!(max_abs(st.x(), &[1.0, 0.0]) < 1e-15);
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn stationary_point_is_a_fixed_point_of_every_variant() {
    let c = [0.3, -1.2, 2.0];
    let p = identity_quadratic(&c);
    let mut sched = ApcgSchedule::new(3, p.mu(), 1.0).unwrap();
    let mut general = ExplicitState::new(&p, &c).unwrap();
    let mut sc = ExplicitState::new(&p, &c).unwrap();
    let mut nsc = ExplicitState::new(&p, &c).unwrap();
    let mut eff = EfficientState::new(&p, &c).unwrap();
    let alpha = p.mu().sqrt() / 3.0;
    let mut a_prev = 1.0 / 3.0;
    for k in 0..30 {
        let i = k % 3;
        general.step_general_at(&p, &mut sched, i).unwrap();
        sc.step_sc_at(&p, alpha, i).unwrap();
        a_prev = nsc.step_nsc_at(&p, a_prev, i).unwrap();
        eff.step_at(&p, i);
        for x in [
            general.x(),
            general.z(),
            sc.x(),
            sc.z(),
            nsc.x(),
            nsc.z(),
            &eff.x(),
            &eff.z(),
        ] {
            assert!(max_abs(x, &c) < 1e-14);
        }
    }
}

#[test]
fn first_iterate_y_equals_starting_point() {
    let p = lasso(5, 3);
    let x0 = [0.5, -0.2, 0.1, 0.0, 1.0];
    let eff = EfficientState::new(&p, &x0).unwrap();
    assert_eq!(eff.y(), x0.to_vec());
    let mut st = ExplicitState::new(&p, &x0).unwrap();
    let mut sched = ApcgSchedule::new(5, p.mu(), 1.0).unwrap();
    st.step_general_at(&p, &mut sched, 2).unwrap();
    assert!(max_abs(st.y(), &x0) < 1e-15);
}

#[test]
fn nsc_alpha_reaching_one_over_n() {
    for n in [2usize, 5, 100, 10_000] {
        let nf = n as f64;
        let a0 = next_alpha_nsc(1.0 / (nf * (nf - 1.0)).sqrt());
        assert!((a0 - 1.0 / nf).abs() < 1e-15 / nf, "n = {n}: {a0}");
        // The recursion α_0² = (1 − α_0)α_{−1}² from α_{−1} = 1/√(n² − 1).
        let b = next_alpha_nsc(1.0 / (nf * nf - 1.0).sqrt());
        assert!((b * b * (nf * nf - 1.0) - (1.0 - b)).abs() < 1e-12);
    }
}

#[test]
fn nsc_alpha_decreases_to_zero() {
    let mut a = 1.0;
    for _ in 0..10_000 {
        let next = next_alpha_nsc(a);
        assert!(next < a && next > 0.0);
        a = next;
    }
    assert!(a < 3e-4);
}

#[test]
fn strongly_convex_stepper_equals_general_with_gamma0_mu() {
    let p = lasso(8, 4);
    let x0 = vec![1.0; 8];
    let mut g = ExplicitState::new(&p, &x0).unwrap();
    let mut s = ExplicitState::new(&p, &x0).unwrap();
    let mut sched = ApcgSchedule::new(8, p.mu(), p.mu()).unwrap();
    let (mut sa, mut sb) = (BlockSampler::new(5), BlockSampler::new(5));
    let alpha = p.mu().sqrt() / 8.0;
    for _ in 0..400 {
        g.step_general(&p, &mut sched, &mut sa).unwrap();
        s.step_sc(&p, alpha, &mut sb).unwrap();
        assert!(max_abs(g.x(), s.x()) < 1e-12);
        assert!(max_abs(g.z(), s.z()) < 1e-12);
    }
}

#[test]
fn efficient_one_step_golden() {
    // Q = [[2, ½], [½, 1]], b = (1, 0), Ψ = 0, x0 = 0, block 0.
    let f = DenseQuadratic::new(
        BlockPartition::scalar(2),
        vec![2.0, 0.5, 0.5, 1.0],
        vec![1.0, 0.0],
    )
    .unwrap();
    let p = CompositeProblem::new(f, Zero).unwrap();
    let alpha = (1.0 - 0.5 / 2f64.sqrt()).sqrt() / 2.0;
    assert!((p.mu().sqrt() / 2.0 - alpha).abs() < 1e-15);
    let mut eff = EfficientState::new(&p, &[0.0, 0.0]).unwrap();
    let mut exp = ExplicitState::new(&p, &[0.0, 0.0]).unwrap();
    eff.step_at(&p, 0);
    exp.step_sc_at(&p, alpha, 0).unwrap();
    let z0 = 0.621_875_823_753_831_8;
    assert!((1.0 / (4.0 * alpha) - z0).abs() < 1e-14);
    assert!(max_abs(&eff.z(), &[z0, 0.0]) < 1e-14);
    assert!(max_abs(exp.z(), &[z0, 0.0]) < 1e-14);
    assert!(max_abs(&eff.x(), &[0.5, 0.0]) < 1e-14);
    assert!(max_abs(exp.x(), &[0.5, 0.0]) < 1e-14);
}

#[test]
fn iterates_are_theta_combinations_of_z_history() {
    for (n, mu_start) in [(6usize, false), (12, true)] {
        let p = lasso(n, 40 + n as u64);
        let gamma0 = if mu_start { p.mu() } else { 1.0 };
        let x0 = vec![0.7; n];
        let psi = |x: &[f64]| p.regularizer().eval(p.partition(), x);
        let mut st = ExplicitState::new(&p, &x0).unwrap();
        let mut sched = ApcgSchedule::new(n, p.mu(), gamma0).unwrap().with_history();
        let mut tracker = ThetaTracker::new(n, p.mu(), psi(&x0));
        let mut sampler = BlockSampler::new(2);
        let mut zs = vec![x0.clone()];
        for k in 1..=300 {
            st.step_general(&p, &mut sched, &mut sampler).unwrap();
            zs.push(st.z().to_vec());
            tracker.advance(sched.history().unwrap().last().unwrap(), psi(st.z()));
            let theta = theta_coefficients(&sched, k).unwrap();
            assert_eq!(theta.len(), k + 1);
            assert!(max_abs(&theta, tracker.theta()) < 1e-14);
            assert!(theta.iter().all(|&t| t >= -1e-15));
            assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let mut comb = vec![0.0; n];
            for (t, z) in theta.iter().zip(&zs) {
                for (c, zj) in comb.iter_mut().zip(z) {
                    *c += t * zj;
                }
            }
            assert!(max_abs(&comb, st.x()) < 1e-8, "k = {k}");
            let psi_hat: f64 = theta.iter().zip(&zs).map(|(t, z)| t * psi(z)).sum();
            assert!((psi_hat - tracker.psi_hat()).abs() < 1e-10);
            assert!(psi(st.x()) <= psi_hat + 1e-10);
        }
    }
}

#[test]
fn theta_first_coefficients() {
    let mut sched = ApcgSchedule::new(4, 0.01, 1.0).unwrap().with_history();
    sched.step().unwrap();
    let a0 = sched.history().unwrap()[0].alpha;
    let t = theta_coefficients(&sched, 1).unwrap();
    assert!((t[0] - (1.0 - 4.0 * a0)).abs() < 1e-15 && (t[1] - 4.0 * a0).abs() < 1e-15);
}

#[test]
fn zero_iterations_return_the_start() {
    let p = lasso(5, 9);
    let x0 = [0.1, 0.2, -0.3, 0.4, 0.5];
    for variant in [
        Variant::General,
        Variant::StronglyConvex,
        Variant::NonStronglyConvex,
        Variant::Efficient,
    ] {
        let sol = solve(
            &p,
            &x0,
            &SolveOptions {
                variant,
                max_iters: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sol.x, x0.to_vec());
        assert_eq!(sol.iters, 0);
        assert_eq!(sol.trace.points.len(), 1);
    }
}

#[test]
fn same_seed_gives_bit_identical_traces() {
    let p = lasso(10, 11);
    let x0 = vec![1.0; 10];
    for variant in [Variant::General, Variant::Efficient] {
        let opts = SolveOptions {
            variant,
            max_iters: 500,
            seed: 42,
            trace_every: Some(7),
            ..Default::default()
        };
        let a = solve(&p, &x0, &opts).unwrap();
        let b = solve(&p, &x0, &opts).unwrap();
        assert_eq!(a, b);
        let c = solve(&p, &x0, &SolveOptions { seed: 43, ..opts }).unwrap();
        assert_ne!(a.trace, c.trace);
    }
}

#[test]
fn all_variants_reach_the_lasso_optimum() {
    let p = lasso(10, 12);
    let x_star = lasso_optimum(&p, 20_000);
    let f_star = lasso_objective(&p, &x_star);
    for variant in [
        Variant::General,
        Variant::StronglyConvex,
        Variant::NonStronglyConvex,
        Variant::Efficient,
    ] {
        let sol = solve(
            &p,
            &[0.0; 10],
            &SolveOptions {
                variant,
                max_iters: 20_000,
                seed: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let gap = lasso_objective(&p, &sol.x) - f_star;
        assert!(gap.abs() < 1e-9, "{variant:?}: {gap}");
    }
}

#[test]
fn block_partition_run_reaches_the_optimum() {
    let part = BlockPartition::from_sizes(&[3, 1, 2, 4]).unwrap();
    let q = apcg_core::synth::random_quadratic(&part, 0.5, 5);
    let p = CompositeProblem::new(q, L1Norm::new(0.1)).unwrap();
    let lasso_like: Lasso = CompositeProblem::new(
        DenseQuadratic::new(
            BlockPartition::scalar(10),
            p.smooth().matrix().to_vec(),
            p.smooth().linear_term().to_vec(),
        )
        .unwrap(),
        L1Norm::new(0.1),
    )
    .unwrap();
    let x_star = lasso_optimum(&lasso_like, 20_000);
    let sol = solve(
        &p,
        &[0.0; 10],
        &SolveOptions {
            max_iters: 4000,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(max_abs(&sol.x, &x_star) < 1e-7);
}
