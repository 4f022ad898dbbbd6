mod common;

use apcg_core::apcg::{solve, solve_with, Control, SolveOptions};
use apcg_core::baselines::{rpcg_step, sdca_epoch, AfgConfig, AfgState, SdcaState};
use apcg_core::erm::{run_solver, RunOptions, Solver};
use apcg_core::quadratic::DenseQuadratic;
use apcg_core::regularizers::Zero;
use apcg_core::synth::random_quadratic;
use apcg_core::{BlockPartition, BlockSampler, CompositeProblem};
use common::*;
use nalgebra::{DMatrix, DVector};

#[test]
fn afg_solves_a_quadratic_to_high_accuracy() {
    let q = random_quadratic(&BlockPartition::scalar(10), 0.5, 3);
    let qd = dense_q(&q);
    let b = DVector::from_column_slice(q.linear_term());
    let x_star = qd.clone().lu().solve(&b).unwrap();
    let f = |x: &DVector<f64>| 0.5 * x.dot(&(&qd * x)) - b.dot(x);
    let p = CompositeProblem::new(q, Zero).unwrap();
    let (lmin, _) = eig_range(&qd);
    let mut st = AfgState::new(&p, &[0.0; 10], Some(lmin), AfgConfig::default()).unwrap();
    for _ in 0..200 {
        st.step(&p).unwrap();
    }
    let gap = f(&DVector::from_column_slice(st.x())) - f(&x_star);
    assert!(gap < 1e-10, "gap {gap}");
}

/// Ill-conditioned coupled quadratic: `Q = M D M` with a wide diagonal `D`.
fn ill_conditioned(n: usize) -> CompositeProblem<DenseQuadratic, Zero> {
    let mut q = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        q[(i, i)] = 1.0;
        if i + 1 < n {
            q[(i, i + 1)] = -0.49;
            q[(i + 1, i)] = -0.49;
        }
    }
    let b: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { -0.5 })
        .collect();
    let f = DenseQuadratic::new(
        BlockPartition::scalar(n),
        q.transpose().as_slice().to_vec(),
        b,
    )
    .unwrap();
    CompositeProblem::new(f, Zero).unwrap()
}

#[test]
fn rpcg_needs_more_epochs_than_apcg_when_ill_conditioned() {
    let n = 30;
    let p = ill_conditioned(n);
    let qd = dense_q(p.smooth());
    let b = DVector::from_column_slice(p.smooth().linear_term());
    let x_star = qd.clone().lu().solve(&b).unwrap();
    let f_star = p.objective(x_star.as_slice());
    let eps = 1e-8 * (p.objective(&vec![0.0; n]) - f_star);
    let apcg_epochs = {
        let mut hit = None;
        solve_with(
            &p,
            &vec![0.0; n],
            &SolveOptions {
                max_iters: 5000 * n,
                seed: 4,
                ..Default::default()
            },
            |cp| {
                if p.objective(cp.x) - f_star <= eps {
                    hit = Some(cp.iter / n);
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        )
        .unwrap();
        hit.expect("APCG reaches the tolerance")
    };
    let mut x = vec![0.0; n];
    let mut sampler = BlockSampler::new(4);
    let mut rpcg_epochs = 0;
    while p.objective(&x) - f_star > eps {
        for _ in 0..n {
            rpcg_step(&p, &mut x, &mut sampler);
        }
        rpcg_epochs += 1;
        assert!(rpcg_epochs < 100_000);
    }
    assert!(
        rpcg_epochs > apcg_epochs,
        "RPCG {rpcg_epochs} vs APCG {apcg_epochs}"
    );
}

#[test]
fn sdca_dual_is_monotone() {
    for prob in [
        hinge_problem(100, 20, 0.3, 1e-3, 1),
        square_problem(50, 8, 1e-2, 1.0, 2),
    ] {
        let mut s = SdcaState::new(&prob);
        let mut sampler = BlockSampler::new(0);
        let mut prev = prob.dual_objective(s.x());
        for _ in 0..20 {
            for _ in 0..prob.n() {
                let i = sampler.next_block(prob.n());
                s.step_at(&prob, i);
                let d = prob.dual_objective(s.x());
                assert!(d >= prev - 1e-12);
                prev = d;
            }
        }
        let dense = DenseErm::of(&prob);
        let w = dense.omega(s.x());
        assert!(s
            .w()
            .iter()
            .zip(w.iter())
            .all(|(a, b)| (a - b).abs() < 1e-10));
        sdca_epoch(&prob, &mut s, &mut sampler);
        assert!(prob.dual_objective(s.x()) >= prev - 1e-12);
    }
}

#[test]
fn afg_needs_more_epochs_than_apcg_on_an_ill_conditioned_dual() {
    let prob = hinge_problem(500, 50, 0.2, 1e-5, 7);
    let mut epochs = Vec::new();
    for solver in [Solver::Apcg, Solver::Afg] {
        let opts = RunOptions {
            solver,
            max_epochs: 20_000,
            seed: 1,
            tol: Some(1e-6),
            ..Default::default()
        };
        epochs.push(
            run_solver(&prob, &opts, |_| Control::Continue)
                .unwrap()
                .converged_epoch,
        );
    }
    let apcg = epochs[0].expect("APCG converges");
    assert!(epochs[1].map_or(true, |afg| afg > apcg), "{epochs:?}");
}

#[test]
fn generic_apcg_and_afg_agree() {
    let p = ill_conditioned(12);
    let sol = solve(
        &p,
        &[0.0; 12],
        &SolveOptions {
            max_iters: 40_000,
            ..Default::default()
        },
    )
    .unwrap();
    let mut st = AfgState::new(&p, &[0.0; 12], None, AfgConfig::default()).unwrap();
    for _ in 0..5000 {
        st.step(&p).unwrap();
    }
    assert!(sol.x.iter().zip(st.x()).all(|(a, b)| (a - b).abs() < 1e-6));
}
