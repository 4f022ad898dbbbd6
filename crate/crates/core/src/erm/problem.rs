use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::loss::{DualTerm, Loss};
use crate::error::check_len;
use crate::math::{ceil, ln, sqrt};
use crate::{Error, Result, SparseColMatrix};

/// `min_w P(w) = (1/n) Σ φ_i(A_iᵀw) + (λ/2)‖w‖²` and its dual
/// `max_x D(x) = (1/n) Σ −φ_i*(−x_i) − (1/(2λn²))‖Ax‖²`.
///
/// Columns of `A` are examples with labels already multiplied in.
#[derive(Debug, Clone)]
pub struct ErmProblem {
    a: SparseColMatrix,
    loss: Loss,
    lambda: f64,
    gamma: f64,
    col_norm_sq: Vec<f64>,
    max_col_norm: f64,
    spectral_norm: f64,
}

/// Block constants of the relocated splitting: `L_i = ‖A_i‖²/(λn²) + γ/n` and
/// `μ = (γ/n) / max_i L_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErmConstants {
    pub lipschitz: Vec<f64>,
    pub mu: f64,
}

/// `a ∈ ∂φ*(−x)`, `w = ω(x)` and `‖D′(x)‖² = (1/n²) Σ (A_iᵀw − a_i)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSubgradient {
    pub a: Vec<f64>,
    pub w: Vec<f64>,
    pub norm_sq: f64,
}

/// Primal and dual values at `(ω(x), x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimalDualReport {
    pub epoch: usize,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub dual_subgrad_norm_sq: f64,
    /// `n/(2γ) ‖D′(x)‖²`, an upper bound on the gap.
    pub lemma4_bound: f64,
}

impl ErmProblem {
    /// The square loss needs `γ ≤ 1` (it is 1-smooth).
    pub fn new(a: SparseColMatrix, loss: Loss, lambda: f64, gamma: f64) -> Result<Self> {
        if a.ncols() == 0 {
            return Err(Error::InvalidInput(
                "the data matrix has no examples".into(),
            ));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!(
                "λ must be positive and finite, got {lambda}"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "γ must be positive and finite, got {gamma}"
            )));
        }
        if let Loss::Square { targets } = &loss {
            check_len(a.ncols(), targets.len())?;
            if targets.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidInput(
                    "regression targets must be finite".into(),
                ));
            }
            if gamma > 1.0 {
                return Err(Error::Config(format!(
                    "the square loss is 1-smooth, so γ must not exceed 1 (got {gamma})"
                )));
            }
        }
        let col_norm_sq: Vec<f64> = (0..a.ncols()).map(|i| a.col_norm_sq(i)).collect();
        let max_col_norm = sqrt(col_norm_sq.iter().copied().fold(0.0, f64::max));
        let spectral_norm = a.spectral_norm();
        Ok(Self {
            a,
            loss,
            lambda,
            gamma,
            col_norm_sq,
            max_col_norm,
            spectral_norm,
        })
    }

    /// Multiplies `labels` into the columns of `features` first.
    pub fn from_labeled(
        mut features: SparseColMatrix,
        labels: &[f64],
        loss: Loss,
        lambda: f64,
        gamma: f64,
    ) -> Result<Self> {
        features.scale_columns(labels)?;
        Self::new(features, loss, lambda, gamma)
    }

    pub fn matrix(&self) -> &SparseColMatrix {
        &self.a
    }

    pub fn loss(&self) -> &Loss {
        &self.loss
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of examples.
    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    /// Number of features.
    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    pub fn col_norm_sq(&self) -> &[f64] {
        &self.col_norm_sq
    }

    /// `R = max_i ‖A_i‖₂`.
    pub fn max_col_norm(&self) -> f64 {
        self.max_col_norm
    }

    /// `‖A‖₂`.
    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    #[inline]
    pub fn dual_term(&self, i: usize) -> DualTerm {
        self.loss.dual_term(i, self.gamma)
    }

    /// `x ∈ dom D`.
    pub fn dual_feasible(&self, x: &[f64]) -> bool {
        x.len() == self.n()
            && x.iter()
                .enumerate()
                .all(|(i, &v)| self.dual_term(i).contains(v))
    }

    /// `D(x)`; `−∞` outside the conjugate domain.
    pub fn dual_objective(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n(), "dual vector length");
        let n = self.n() as f64;
        let mut sep = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let v = self.dual_term(i).value(xi);
            if v == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            sep += v;
        }
        let mut ax = vec![0.0; self.d()];
        self.a.matvec(x, &mut ax);
        let q: f64 = ax.iter().map(|v| v * v).sum();
        sep / n - q / (2.0 * self.lambda * n * n)
    }

    /// `P(w)`.
    pub fn primal_objective(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.d(), "primal vector length");
        let n = self.n();
        let mut loss = 0.0;
        for i in 0..n {
            loss += self.loss.phi(i, self.a.col_dot(i, w), self.gamma);
        }
        let reg: f64 = w.iter().map(|v| v * v).sum();
        loss / n as f64 + 0.5 * self.lambda * reg
    }

    /// `ω(x) = Ax/(λn)`.
    pub fn primal_from_dual(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n(), "dual vector length");
        let mut w = vec![0.0; self.d()];
        self.a.matvec(x, &mut w);
        let s = 1.0 / (self.lambda * self.n() as f64);
        w.iter_mut().for_each(|v| *v *= s);
        w
    }

    pub fn constants(&self) -> ErmConstants {
        let n = self.n() as f64;
        let g = self.gamma / n;
        let lipschitz: Vec<f64> = self
            .col_norm_sq
            .iter()
            .map(|&c| c / (self.lambda * n * n) + g)
            .collect();
        let lmax = lipschitz.iter().copied().fold(0.0, f64::max);
        ErmConstants {
            lipschitz,
            mu: (g / lmax).min(1.0),
        }
    }

    pub fn dual_subgradient(&self, x: &[f64]) -> Result<DualSubgradient> {
        check_len(self.n(), x.len())?;
        if !self.dual_feasible(x) {
            return Err(Error::InvalidInput(
                "dual point outside the conjugate domain".into(),
            ));
        }
        let w = self.primal_from_dual(x);
        let mut a = Vec::with_capacity(self.n());
        let mut s = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let margin = self.a.col_dot(i, &w);
            let ai = self.dual_term(i).subgradient(xi, margin);
            s += (margin - ai) * (margin - ai);
            a.push(ai);
        }
        let n = self.n() as f64;
        Ok(DualSubgradient {
            a,
            w,
            norm_sq: s / (n * n),
        })
    }

    /// Gap report at `(ω(x), x)`.
    pub fn report(&self, x: &[f64], epoch: usize) -> Result<PrimalDualReport> {
        let sub = self.dual_subgradient(x)?;
        let primal = self.primal_objective(&sub.w);
        let dual = self.dual_objective(x);
        Ok(PrimalDualReport {
            epoch,
            primal,
            dual,
            gap: primal - dual,
            dual_subgrad_norm_sq: sub.norm_sq,
            lemma4_bound: self.n() as f64 / (2.0 * self.gamma) * sub.norm_sq,
        })
    }

    /// One proximal full-gradient step on `−D` under the simple splitting
    /// `f(x) = ‖Ax‖²/(2λn²)`, `Ψ(x) = (1/n) Σ φ_i*(−x_i)`, with step constant `‖A‖²/(λn²)`.
    pub fn full_prox_step(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n(), x.len())?;
        let n = self.n() as f64;
        let lf = self.spectral_norm * self.spectral_norm / (self.lambda * n * n);
        let w = self.primal_from_dual(x);
        let mut t = Vec::with_capacity(self.n());
        for (i, &xi) in x.iter().enumerate() {
            let grad = self.a.col_dot(i, &w) / n;
            let term = self.dual_term(i);
            let v = if lf > 0.0 {
                term.prox(xi - grad / lf, lf, n, 0.0)
            } else {
                (term.lin / term.quad).clamp(term.lo, term.hi)
            };
            t.push(v);
        }
        Ok(t)
    }

    /// `(ληn + ‖A‖²)/(λγn) · (D* − D(x))`, an upper bound on `P(ω(x)) − D(x)` for strongly
    /// convex losses.
    pub fn gap_by_dual_bound(&self, x: &[f64], dual_opt: f64) -> Result<f64> {
        let eta = self.loss.strong_convexity_eta().ok_or_else(|| {
            Error::Config(format!(
                "the {} loss is not strongly convex",
                self.loss.name()
            ))
        })?;
        check_len(self.n(), x.len())?;
        let n = self.n() as f64;
        let a2 = self.spectral_norm * self.spectral_norm;
        let coef = (self.lambda * eta * n + a2) / (self.lambda * self.gamma * n);
        Ok(coef * (dual_opt - self.dual_objective(x)))
    }

    /// `4‖A‖²/(λγn) · (D* − D(x))`, an upper bound on the gap at `T(x)`.
    pub fn full_prox_gap_bound(&self, x: &[f64], dual_opt: f64) -> f64 {
        let n = self.n() as f64;
        let a2 = self.spectral_norm * self.spectral_norm;
        4.0 * a2 / (self.lambda * self.gamma * n) * (dual_opt - self.dual_objective(x))
    }
}

/// `⌈(n + √(nR²/(λγ))) · ln(C/ε)⌉`; zero once `ε ≥ C`.
pub fn complexity_estimate(n: usize, r: f64, lambda: f64, gamma: f64, epsilon: f64, c: f64) -> u64 {
    if epsilon >= c {
        return 0;
    }
    let nf = n as f64;
    ceil((nf + sqrt(nf * r * r / (lambda * gamma))) * ln(c / epsilon)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synth_binary, SynthSpec};

    fn e1() -> ErmProblem {
        let a = SparseColMatrix::from_columns(1, &[vec![(0, 1.0)]]).unwrap();
        ErmProblem::new(a, Loss::SmoothedHinge, 1.0, 1.0).unwrap()
    }

    fn desk(seed: u64) -> ErmProblem {
        let (a, b) = synth_binary(&SynthSpec {
            n: 40,
            d: 10,
            seed,
            ..Default::default()
        })
        .unwrap();
        ErmProblem::from_labeled(a, &b, Loss::SmoothedHinge, 0.01, 1.0).unwrap()
    }

    #[test]
    fn dual_examples() {
        let p = e1();
        assert_eq!(p.dual_objective(&[0.0]), 0.0);
        assert_eq!(p.dual_objective(&[1.0]), 0.0);
        assert_eq!(p.dual_objective(&[1.5]), f64::NEG_INFINITY);
        assert_eq!(p.primal_objective(&[0.0]), 0.5);
        assert_eq!(p.primal_objective(&[2.0]), 2.0);
    }

    #[test]
    fn primal_from_dual_example() {
        let a = SparseColMatrix::from_columns(2, &[vec![(0, 2.0)]]).unwrap();
        let p = ErmProblem::new(a, Loss::SmoothedHinge, 1.0, 1.0).unwrap();
        assert_eq!(p.primal_from_dual(&[1.0]), vec![2.0, 0.0]);
        assert_eq!(p.primal_from_dual(&[0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn constants_with_uniform_columns() {
        let cols: Vec<Vec<(usize, f64)>> = (0..100).map(|i| vec![(i % 5, 1.0)]).collect();
        let a = SparseColMatrix::from_columns(5, &cols).unwrap();
        let p = ErmProblem::new(a, Loss::SmoothedHinge, 1e-4, 1.0).unwrap();
        let c = p.constants();
        assert!((c.mu - 0.01 / 1.01).abs() < 1e-15);
        assert!((c.mu - 0.00990099).abs() < 1e-8);
        let big = ErmProblem::new(p.matrix().clone(), Loss::SmoothedHinge, 1e-4, 1e12).unwrap();
        assert!(big.constants().mu <= 1.0);
    }

    #[test]
    fn subgradient_interior_example() {
        let p = desk(1);
        let x = vec![0.5; p.n()];
        let s = p.dual_subgradient(&x).unwrap();
        assert!(s.a.iter().all(|&a| a == 0.5));
        assert!(p.dual_subgradient(&vec![2.0; p.n()]).is_err());
    }

    #[test]
    fn weak_duality_and_lemma4_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for seed in 0..5 {
            let p = desk(seed);
            for _ in 0..20 {
                let x: Vec<f64> = (0..p.n()).map(|_| rng.random_range(0.0..=1.0)).collect();
                let r = p.report(&x, 0).unwrap();
                assert!(r.gap >= -1e-12);
                assert!(
                    r.gap <= r.lemma4_bound + 1e-10,
                    "{} > {}",
                    r.gap,
                    r.lemma4_bound
                );
            }
        }
    }

    #[test]
    fn gap_by_dual_rejects_hinge() {
        let p = e1();
        assert!(matches!(
            p.gap_by_dual_bound(&[0.0], 0.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn square_loss_requires_small_gamma() {
        let a = SparseColMatrix::from_columns(1, &[vec![(0, 1.0)]]).unwrap();
        assert!(ErmProblem::new(a.clone(), Loss::Square { targets: vec![1.0] }, 1.0, 2.0).is_err());
        assert!(ErmProblem::new(
            a,
            Loss::Square {
                targets: vec![1.0, 2.0]
            },
            1.0,
            1.0
        )
        .is_err());
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(complexity_estimate(10, 1.0, 1e-3, 1.0, 1.0, 1.0), 0);
        let c = 10f64.exp();
        let k = complexity_estimate(10_000, 1.0, 1e-6, 1.0, 1.0, c);
        assert!((k as f64 - 1.1e6).abs() <= 1.0, "{k}");
        let mut prev = u64::MAX;
        for l in [1e-8, 1e-6, 1e-4, 1e-2] {
            let k = complexity_estimate(1000, 1.0, l, 1.0, 1e-6, 1.0);
            assert!(k < prev);
            prev = k;
        }
    }
}
