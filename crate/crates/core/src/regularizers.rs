//! Closed-form separable regularizers.

use crate::SeparableRegularizer;

/// `Ψ ≡ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Zero;

impl SeparableRegularizer for Zero {
    fn eval_block(&self, _block: usize, _xi: &[f64]) -> f64 {
        0.0
    }

    fn prox_block(&self, _block: usize, center: &[f64], _weight: f64, out: &mut [f64]) {
        out.copy_from_slice(center);
    }
}

/// `Ψ(x) = c ‖x‖₁`, applied coordinate-wise inside every block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    scale: f64,
}

impl L1Norm {
    pub fn new(scale: f64) -> Self {
        assert!(
            scale >= 0.0 && scale.is_finite(),
            "ℓ1 scale must be finite and ≥ 0"
        );
        Self { scale }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// `sign(c) · max(|c| − t, 0)`.
#[inline]
pub fn soft_threshold(c: f64, t: f64) -> f64 {
    if c > t {
        c - t
    } else if c < -t {
        c + t
    } else {
        0.0
    }
}

impl SeparableRegularizer for L1Norm {
    fn eval_block(&self, _block: usize, xi: &[f64]) -> f64 {
        self.scale * xi.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox_block(&self, _block: usize, center: &[f64], weight: f64, out: &mut [f64]) {
        let t = self.scale / weight;
        for (o, &c) in out.iter_mut().zip(center) {
            *o = soft_threshold(c, t);
        }
    }
}

/// Indicator of the box `[lo, hi]` in every coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxIndicator {
    lo: f64,
    hi: f64,
}

impl BoxIndicator {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty box");
        Self { lo, hi }
    }
}

impl SeparableRegularizer for BoxIndicator {
    fn eval_block(&self, _block: usize, xi: &[f64]) -> f64 {
        if xi.iter().all(|&v| v >= self.lo && v <= self.hi) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox_block(&self, _block: usize, center: &[f64], _weight: f64, out: &mut [f64]) {
        for (o, &c) in out.iter_mut().zip(center) {
            *o = c.clamp(self.lo, self.hi);
        }
    }
}
