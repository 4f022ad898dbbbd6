//! Composite problem abstractions: the smooth part `f`, the block-separable part `Ψ`,
//! and the weighted norm `‖·‖_L` they induce.

use crate::error::check_len;
use crate::math::sqrt;
use crate::{BlockPartition, Error, Result};

/// Smooth convex function with block-wise Lipschitz partial gradients.
///
/// `lipschitz()[i]` is the constant `L_i` of the block-`i` partial gradient and
/// `convexity()` is the strong convexity modulus `μ` of `f` measured in `‖·‖_L`, so
/// `0 ≤ μ ≤ 1`.
pub trait SmoothOracle {
    fn partition(&self) -> &BlockPartition;

    fn value(&self, x: &[f64]) -> f64;

    /// Writes `∇f(x)` into `out` (length `N`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);

    /// Writes `∇_i f(x)` into `out` (length `N_i`).
    fn partial_gradient(&self, x: &[f64], block: usize, out: &mut [f64]);

    fn lipschitz(&self) -> &[f64];

    fn convexity(&self) -> f64;
}

/// Block-separable convex regularizer `Ψ(x) = Σ_i Ψ_i(x_i)`.
///
/// Values are extended reals: `f64::INFINITY` marks points outside `dom Ψ_i`.
/// Implementations never return NaN.
pub trait SeparableRegularizer {
    /// `Ψ_i(x_i)`.
    fn eval_block(&self, block: usize, xi: &[f64]) -> f64;

    /// Writes `argmin_h { weight/2 ‖h − center‖² + Ψ_i(h) }` into `out`. `weight > 0`.
    fn prox_block(&self, block: usize, center: &[f64], weight: f64, out: &mut [f64]);

    /// `Ψ(x)`.
    fn eval(&self, partition: &BlockPartition, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..partition.num_blocks() {
            let v = self.eval_block(i, partition.block(x, i));
            if v == f64::INFINITY {
                return f64::INFINITY;
            }
            total += v;
        }
        total
    }

    /// Full prox with a common weight, block by block.
    fn prox(&self, partition: &BlockPartition, center: &[f64], weight: f64, out: &mut [f64]) {
        for i in 0..partition.num_blocks() {
            let r = partition.range(i);
            self.prox_block(i, &center[r.clone()], weight, &mut out[r]);
        }
    }
}

impl<T: SmoothOracle + ?Sized> SmoothOracle for &T {
    fn partition(&self) -> &BlockPartition {
        (**self).partition()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (**self).gradient(x, out)
    }
    fn partial_gradient(&self, x: &[f64], block: usize, out: &mut [f64]) {
        (**self).partial_gradient(x, block, out)
    }
    fn lipschitz(&self) -> &[f64] {
        (**self).lipschitz()
    }
    fn convexity(&self) -> f64 {
        (**self).convexity()
    }
}

impl<T: SeparableRegularizer + ?Sized> SeparableRegularizer for &T {
    fn eval_block(&self, block: usize, xi: &[f64]) -> f64 {
        (**self).eval_block(block, xi)
    }
    fn prox_block(&self, block: usize, center: &[f64], weight: f64, out: &mut [f64]) {
        (**self).prox_block(block, center, weight, out)
    }
}

/// `F(x) = f(x) + Ψ(x)` with validated constants.
#[derive(Debug, Clone)]
pub struct CompositeProblem<F, R> {
    f: F,
    psi: R,
}

impl<F: SmoothOracle, R: SeparableRegularizer> CompositeProblem<F, R> {
    pub fn new(f: F, psi: R) -> Result<Self> {
        let n = f.partition().num_blocks();
        let l = f.lipschitz();
        check_len(n, l.len())?;
        if l.iter().any(|&li| !(li > 0.0 && li.is_finite())) {
            return Err(Error::InvalidInput(
                "block Lipschitz constants must be positive and finite".into(),
            ));
        }
        let mu = f.convexity();
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidInput(alloc::format!(
                "convexity parameter must lie in [0, 1], got {mu}"
            )));
        }
        Ok(Self { f, psi })
    }

    #[inline]
    pub fn smooth(&self) -> &F {
        &self.f
    }

    #[inline]
    pub fn regularizer(&self) -> &R {
        &self.psi
    }

    #[inline]
    pub fn partition(&self) -> &BlockPartition {
        self.f.partition()
    }

    #[inline]
    pub fn num_blocks(&self) -> usize {
        self.partition().num_blocks()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.partition().dim()
    }

    #[inline]
    pub fn lipschitz(&self) -> &[f64] {
        self.f.lipschitz()
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.f.convexity()
    }

    /// `F(x)`; `+∞` outside `dom Ψ`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let psi = self.psi.eval(self.partition(), x);
        if psi == f64::INFINITY {
            return f64::INFINITY;
        }
        self.f.value(x) + psi
    }

    /// `‖x − y‖_L`.
    pub fn distance_l(&self, x: &[f64], y: &[f64]) -> f64 {
        let p = self.partition();
        let mut s = 0.0;
        for (i, &li) in self.lipschitz().iter().enumerate() {
            let d: f64 = p.range(i).map(|j| (x[j] - y[j]) * (x[j] - y[j])).sum();
            s += li * d;
        }
        sqrt(s)
    }
}

/// `‖x‖_L = (Σ_i L_i ‖x_i‖²)^{1/2}`.
pub fn weighted_norm(x: &[f64], weights: &[f64], partition: &BlockPartition) -> Result<f64> {
    check_len(partition.dim(), x.len())?;
    check_len(partition.num_blocks(), weights.len())?;
    if weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidInput("norm weights must be positive".into()));
    }
    let mut s = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        let b = partition.block(x, i);
        s += w * b.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(sqrt(s))
}

/// Checked block prox: `argmin_h { weight/2 ‖h − center‖² + Ψ_i(h) }`.
pub fn block_prox<R: SeparableRegularizer + ?Sized>(
    reg: &R,
    block: usize,
    center: &[f64],
    weight: f64,
    out: &mut [f64],
) -> Result<()> {
    check_len(center.len(), out.len())?;
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(Error::InvalidInput(
            "prox weight must be positive and finite".into(),
        ));
    }
    if center.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("prox center must be finite".into()));
    }
    reg.prox_block(block, center, weight, out);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularizers::{BoxIndicator, L1Norm, Zero};

    #[test]
    fn weighted_norm_examples() {
        let p = BlockPartition::scalar(3);
        assert_eq!(weighted_norm(&[3.0, 4.0, 0.0], &[1.0; 3], &p).unwrap(), 5.0);
        assert_eq!(weighted_norm(&[0.0; 3], &[2.0, 5.0, 7.0], &p).unwrap(), 0.0);
        let p2 = BlockPartition::scalar(2);
        let v = weighted_norm(&[1.0, -1.0], &[4.0, 9.0], &p2).unwrap();
        assert!((v - 13f64.sqrt()).abs() < 1e-15);
        assert!((v - 3.605551).abs() < 1e-6);
    }

    #[test]
    fn weighted_norm_rejects_bad_dimensions() {
        let p = BlockPartition::scalar(2);
        assert!(matches!(
            weighted_norm(&[1.0], &[1.0, 1.0], &p),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(weighted_norm(&[1.0, 1.0], &[1.0], &p).is_err());
    }

    #[test]
    fn block_prox_examples() {
        let mut out = [0.0];
        block_prox(&Zero, 0, &[1.25], 3.0, &mut out).unwrap();
        assert_eq!(out, [1.25]);
        block_prox(&L1Norm::new(1.0), 0, &[2.0], 1.0, &mut out).unwrap();
        assert_eq!(out, [1.0]);
        block_prox(&BoxIndicator::new(0.0, 1.0), 0, &[1.7], 1.0, &mut out).unwrap();
        assert_eq!(out, [1.0]);
    }

    #[test]
    fn block_prox_rejects_non_finite() {
        let mut out = [0.0];
        assert!(block_prox(&Zero, 0, &[f64::NAN], 1.0, &mut out).is_err());
        assert!(block_prox(&Zero, 0, &[0.0], 0.0, &mut out).is_err());
        assert!(block_prox(&Zero, 0, &[0.0], f64::INFINITY, &mut out).is_err());
    }
}
