//! Dense quadratic smooth part `f(x) = ½ xᵀQx − bᵀx`.

use alloc::vec::Vec;

use crate::error::check_len;
use crate::math::sqrt;
use crate::{BlockPartition, Error, Result, SmoothOracle};

/// `f(x) = ½ xᵀQx − bᵀx` with symmetric positive semidefinite `Q` stored row-major.
///
/// `L_i` is the largest eigenvalue of the diagonal block `Q_ii` and `μ` the smallest
/// eigenvalue of `D^{-1/2} Q D^{-1/2}` with `D = blockdiag(L_i I)`, clamped to `[0, 1]`.
/// Both come from a Jacobi eigenvalue sweep at construction, which costs `O(N³)` per sweep.
#[derive(Debug, Clone)]
pub struct DenseQuadratic {
    partition: BlockPartition,
    q: Vec<f64>,
    b: Vec<f64>,
    lipschitz: Vec<f64>,
    mu: f64,
}

impl DenseQuadratic {
    pub fn new(partition: BlockPartition, q: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = partition.dim();
        check_len(n * n, q.len())?;
        check_len(n, b.len())?;
        if q.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("quadratic data must be finite".into()));
        }
        for r in 0..n {
            for c in 0..r {
                if q[r * n + c] != q[c * n + r] {
                    return Err(Error::InvalidInput("Q must be symmetric".into()));
                }
            }
        }
        let mut lipschitz = Vec::with_capacity(partition.num_blocks());
        for i in 0..partition.num_blocks() {
            let rg = partition.range(i);
            let m = rg.len();
            let mut block = Vec::with_capacity(m * m);
            for r in rg.clone() {
                block.extend_from_slice(&q[r * n + rg.start..r * n + rg.end]);
            }
            let top = symmetric_eigenvalues(&mut block, m)
                .into_iter()
                .fold(0.0, f64::max);
            lipschitz.push(top);
        }
        let mut scale = Vec::with_capacity(n);
        for (i, &li) in lipschitz.iter().enumerate() {
            scale.extend(core::iter::repeat(1.0 / sqrt(li)).take(partition.size(i)));
        }
        let mut scaled = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                scaled.push(scale[r] * q[r * n + c] * scale[c]);
            }
        }
        let lower = symmetric_eigenvalues(&mut scaled, n)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let mu = if lower.is_finite() {
            lower.clamp(0.0, 1.0)
        } else {
            0.0
        };
        Ok(Self {
            partition,
            q,
            b,
            lipschitz,
            mu,
        })
    }

    /// Replaces the convexity parameter, e.g. with an exactly computed one.
    pub fn with_convexity(mut self, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidInput(
                "convexity parameter must lie in [0, 1]".into(),
            ));
        }
        self.mu = mu;
        Ok(self)
    }

    /// Upper bound on the Lipschitz constant of the full gradient (max absolute row sum).
    pub fn full_lipschitz_bound(&self) -> f64 {
        let n = self.partition.dim();
        (0..n)
            .map(|r| {
                self.q[r * n..(r + 1) * n]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn linear_term(&self) -> &[f64] {
        &self.b
    }
}

/// Eigenvalues of the symmetric `m × m` row-major matrix `a` by cyclic Jacobi rotations.
/// `a` is overwritten.
fn symmetric_eigenvalues(a: &mut [f64], m: usize) -> Vec<f64> {
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|r| (0..m).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * m + c] * a[r * m + c])
            .sum();
        let diag: f64 = (0..m).map(|r| a[r * m + r] * a[r * m + r]).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|r| a[r * m + r]).collect()
}

impl SmoothOracle for DenseQuadratic {
    fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.partition.dim();
        let mut v = 0.0;
        for r in 0..n {
            let qx: f64 = self.q[r * n..(r + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
            v += x[r] * (0.5 * qx - self.b[r]);
        }
        v
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = self.partition.dim();
        for (r, o) in out.iter_mut().enumerate() {
            let qx: f64 = self.q[r * n..(r + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
            *o = qx - self.b[r];
        }
    }

    fn partial_gradient(&self, x: &[f64], block: usize, out: &mut [f64]) {
        let n = self.partition.dim();
        for (o, r) in out.iter_mut().zip(self.partition.range(block)) {
            let qx: f64 = self.q[r * n..(r + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
            *o = qx - self.b[r];
        }
    }

    fn lipschitz(&self) -> &[f64] {
        &self.lipschitz
    }

    fn convexity(&self) -> f64 {
        self.mu
    }
}
