//! Reference implementations shared by the integration tests. They work on dense
//! matrices and recompute everything from scratch, independently of the solver code.

#![allow(dead_code)]

use apcg_core::erm::{ErmProblem, Loss};
use apcg_core::quadratic::DenseQuadratic;
use apcg_core::regularizers::L1Norm;
use apcg_core::synth::{random_quadratic, synth_binary, SynthSpec};
use apcg_core::{BlockPartition, CompositeProblem, SparseColMatrix};
use nalgebra::{DMatrix, DVector};

pub type Lasso = CompositeProblem<DenseQuadratic, L1Norm>;

/// `½xᵀQx − bᵀx + 0.1‖x‖₁` on `dim` scalar blocks.
pub fn lasso(dim: usize, seed: u64) -> Lasso {
    let q = random_quadratic(&BlockPartition::scalar(dim), 0.5, seed);
    CompositeProblem::new(q, L1Norm::new(0.1)).unwrap()
}

pub fn dense_q(q: &DenseQuadratic) -> DMatrix<f64> {
    let n = q.linear_term().len();
    DMatrix::from_row_slice(n, n, q.matrix())
}

/// Extreme eigenvalues of a symmetric matrix.
pub fn eig_range(m: &DMatrix<f64>) -> (f64, f64) {
    let e = m.clone().symmetric_eigenvalues();
    (e.min(), e.max())
}

/// Proximal gradient on the lasso with the exact step `1/λ_max(Q)`.
pub fn lasso_optimum(p: &Lasso, iters: usize) -> Vec<f64> {
    let q = dense_q(p.smooth());
    let b = DVector::from_column_slice(p.smooth().linear_term());
    let (_, lmax) = eig_range(&q);
    let t = 0.1 / lmax;
    let mut x = DVector::zeros(b.len());
    for _ in 0..iters {
        let g = &q * &x - &b;
        let c = &x - g / lmax;
        x = c.map(|v| v.signum() * (v.abs() - t).max(0.0));
    }
    x.as_slice().to_vec()
}

pub fn lasso_objective(p: &Lasso, x: &[f64]) -> f64 {
    let q = dense_q(p.smooth());
    let b = DVector::from_column_slice(p.smooth().linear_term());
    let xv = DVector::from_column_slice(x);
    0.5 * xv.dot(&(&q * &xv)) - b.dot(&xv) + 0.1 * xv.iter().map(|v| v.abs()).sum::<f64>()
}

pub fn dense(a: &SparseColMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols());
    for c in 0..a.ncols() {
        let (rows, vals) = a.col(c);
        for (&r, &v) in rows.iter().zip(vals) {
            m[(r, c)] = v;
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    Hinge,
    Square,
}

/// Dense restatement of the regularized ERM primal/dual pair.
pub struct DenseErm {
    pub a: DMatrix<f64>,
    pub lambda: f64,
    pub gamma: f64,
    pub kind: Kind,
    pub targets: Vec<f64>,
}

impl DenseErm {
    pub fn of(p: &ErmProblem) -> Self {
        let (kind, targets) = match p.loss() {
            Loss::SmoothedHinge => (Kind::Hinge, vec![1.0; p.n()]),
            Loss::Square { targets } => (Kind::Square, targets.clone()),
        };
        Self {
            a: dense(p.matrix()),
            lambda: p.lambda(),
            gamma: p.gamma(),
            kind,
            targets,
        }
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn phi(&self, i: usize, a: f64) -> f64 {
        let g = self.gamma;
        match self.kind {
            Kind::Hinge if a >= 1.0 => 0.0,
            Kind::Hinge if a <= 1.0 - g => 1.0 - a - g / 2.0,
            Kind::Hinge => (1.0 - a).powi(2) / (2.0 * g),
            Kind::Square => 0.5 * (a - self.targets[i]).powi(2),
        }
    }

    /// `−φ_i*(−x)`.
    pub fn neg_conj(&self, i: usize, x: f64) -> f64 {
        match self.kind {
            Kind::Hinge if !(0.0..=1.0).contains(&x) => f64::NEG_INFINITY,
            Kind::Hinge => x - self.gamma / 2.0 * x * x,
            Kind::Square => self.targets[i] * x - 0.5 * x * x,
        }
    }

    pub fn dual(&self, x: &[f64]) -> f64 {
        let n = self.n() as f64;
        let ax = &self.a * DVector::from_column_slice(x);
        let sep: f64 = x
            .iter()
            .enumerate()
            .map(|(i, &v)| self.neg_conj(i, v))
            .sum();
        sep / n - ax.norm_squared() / (2.0 * self.lambda * n * n)
    }

    pub fn omega(&self, x: &[f64]) -> DVector<f64> {
        &self.a * DVector::from_column_slice(x) / (self.lambda * self.n() as f64)
    }

    pub fn primal(&self, w: &DVector<f64>) -> f64 {
        let margins = self.a.transpose() * w;
        let loss: f64 = margins
            .iter()
            .enumerate()
            .map(|(i, &m)| self.phi(i, m))
            .sum();
        loss / self.n() as f64 + 0.5 * self.lambda * w.norm_squared()
    }

    pub fn gap(&self, x: &[f64]) -> f64 {
        self.primal(&self.omega(x)) - self.dual(x)
    }

    /// `n/(2γ)‖D′(x)‖²` with the subgradient of smallest norm.
    pub fn lemma4_bound(&self, x: &[f64]) -> f64 {
        let margins = self.a.transpose() * self.omega(x);
        let n = self.n() as f64;
        let mut s = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let m = margins[i];
            let resid = match self.kind {
                Kind::Square => m - (self.targets[i] - xi),
                Kind::Hinge => {
                    let interior = 1.0 - self.gamma * xi;
                    if xi <= 0.0 {
                        (m - interior).min(0.0)
                    } else if xi >= 1.0 {
                        (m - interior).max(0.0)
                    } else {
                        m - interior
                    }
                }
            };
            s += resid * resid;
        }
        n / (2.0 * self.gamma) * s / (n * n)
    }

    pub fn spectral_norm(&self) -> f64 {
        self.a.clone().svd(false, false).singular_values.max()
    }

    /// Dual coordinate ascent with exact line maximization until the dual stops moving.
    pub fn solve_dual(&self, epochs: usize) -> (Vec<f64>, f64) {
        let n = self.n();
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut ax = DVector::zeros(self.a.nrows());
        let norms: Vec<f64> = (0..n).map(|i| self.a.column(i).norm_squared()).collect();
        for _ in 0..epochs {
            for i in 0..n {
                let col = self.a.column(i);
                let margin = col.dot(&ax) / (self.lambda * nf);
                let (quad, lin) = match self.kind {
                    Kind::Hinge => (self.gamma, 1.0),
                    Kind::Square => (1.0, self.targets[i]),
                };
                let s = norms[i] / (self.lambda * nf);
                let mut next = x[i] + (lin - quad * x[i] - margin) / (quad + s);
                if self.kind == Kind::Hinge {
                    next = next.clamp(0.0, 1.0);
                }
                ax += col * (next - x[i]);
                x[i] = next;
            }
        }
        let d = self.dual(&x);
        (x, d)
    }
}

pub fn hinge_problem(n: usize, d: usize, density: f64, lambda: f64, seed: u64) -> ErmProblem {
    let spec = SynthSpec {
        n,
        d,
        density,
        seed,
        ..Default::default()
    };
    let (a, b) = synth_binary(&spec).unwrap();
    ErmProblem::from_labeled(a, &b, Loss::SmoothedHinge, lambda, 1.0).unwrap()
}

pub fn square_problem(n: usize, d: usize, lambda: f64, gamma: f64, seed: u64) -> ErmProblem {
    let spec = SynthSpec {
        n,
        d,
        density: 0.5,
        seed,
        ..Default::default()
    };
    let (a, b) = synth_binary(&spec).unwrap();
    ErmProblem::from_labeled(
        a,
        &b,
        Loss::Square {
            targets: vec![1.0; n],
        },
        lambda,
        gamma,
    )
    .unwrap()
}

/// Minimizer of a convex function on `[lo, hi]` by golden-section search.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Maximum of `f` over a grid on `[lo, hi]`, refined around the best point until the
/// spacing is below `tol`.
pub fn grid_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut best = (lo, f64::NEG_INFINITY);
    loop {
        let steps = 400;
        let dx = (hi - lo) / steps as f64;
        for s in 0..=steps {
            let t = lo + dx * s as f64;
            let v = f(t);
            if v > best.1 {
                best = (t, v);
            }
        }
        if dx < tol {
            return best;
        }
        lo = (best.0 - 2.0 * dx).max(lo);
        hi = (best.0 + 2.0 * dx).min(hi);
    }
}
