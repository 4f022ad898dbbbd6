//! Reproducible synthetic instances.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::math::sqrt;
use crate::quadratic::DenseQuadratic;
use crate::{BlockPartition, Result, SparseColMatrix};

/// Parameters of a synthetic binary classification set.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Examples (columns).
    pub n: usize,
    /// Features (rows).
    pub d: usize,
    /// Probability that an entry is stored, in `(0, 1]`.
    pub density: f64,
    /// Feature `j` is scaled by `(j+1)^{-feature_decay}`; larger values make `AᵀA` more
    /// ill-conditioned.
    pub feature_decay: f64,
    /// Rescale every nonzero column to unit norm, so `R = 1`.
    pub normalize: bool,
    /// Probability of flipping a planted label.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n: 200,
            d: 50,
            density: 0.2,
            feature_decay: 0.0,
            normalize: true,
            label_noise: 0.1,
            seed: 0,
        }
    }
}

/// Sparse Gaussian columns with labels from a planted hyperplane. Labels are returned
/// separately and are not multiplied into the columns.
pub fn synth_binary(spec: &SynthSpec) -> Result<(SparseColMatrix, Vec<f64>)> {
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(crate::Error::InvalidInput(
            "density must lie in (0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let planted: Vec<f64> = (0..spec.d).map(|_| rng.sample(StandardNormal)).collect();
    let scales: Vec<f64> = (0..spec.d)
        .map(|j| crate::math::powf((j + 1) as f64, -spec.feature_decay))
        .collect();
    let mut columns = Vec::with_capacity(spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let mut col: Vec<(usize, f64)> = Vec::new();
        for (r, &s) in scales.iter().enumerate() {
            if rng.random::<f64>() < spec.density {
                let g: f64 = rng.sample(StandardNormal);
                if g != 0.0 {
                    col.push((r, g * s));
                }
            }
        }
        if spec.normalize {
            let norm = sqrt(col.iter().map(|(_, v)| v * v).sum());
            if norm > 0.0 {
                col.iter_mut().for_each(|(_, v)| *v /= norm);
            }
        }
        let margin: f64 = col.iter().map(|&(r, v)| v * planted[r]).sum();
        let mut label = if margin >= 0.0 { 1.0 } else { -1.0 };
        if rng.random::<f64>() < spec.label_noise {
            label = -label;
        }
        labels.push(label);
        columns.push(col);
    }
    Ok((SparseColMatrix::from_columns(spec.d, &columns)?, labels))
}

/// Random symmetric, diagonally dominant quadratic `½ xᵀQx − bᵀx`.
///
/// `coupling ∈ (0, 1)` is the ratio of off-diagonal mass to the diagonal before a random
/// diagonal rescaling; values near 1 give small convexity parameters.
pub fn random_quadratic(partition: &BlockPartition, coupling: f64, seed: u64) -> DenseQuadratic {
    assert!(
        coupling > 0.0 && coupling < 1.0,
        "coupling must lie in (0, 1)"
    );
    let n = partition.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![0.0f64; n * n];
    for r in 0..n {
        for c in 0..r {
            let v = rng.random_range(-1.0..1.0);
            s[r * n + c] = v;
            s[c * n + r] = v;
        }
    }
    for r in 0..n {
        let off: f64 = (0..n).filter(|&c| c != r).map(|c| s[r * n + c].abs()).sum();
        s[r * n + r] = (off / coupling).max(1.0) * rng.random_range(1.0..1.5);
    }
    let scale: Vec<f64> = (0..n)
        .map(|_| libm::exp(rng.random_range(-1.0..1.0)))
        .collect();
    let mut q = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..=r {
            let v = scale[r] * s[r * n + c] * scale[c];
            q[r * n + c] = v;
            q[c * n + r] = v;
        }
    }
    let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    DenseQuadratic::new(partition.clone(), q, b).expect("generated quadratic is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_dataset() {
        let spec = SynthSpec {
            seed: 9,
            ..Default::default()
        };
        assert_eq!(synth_binary(&spec).unwrap(), synth_binary(&spec).unwrap());
        let other = SynthSpec {
            seed: 10,
            ..Default::default()
        };
        assert_ne!(synth_binary(&spec).unwrap(), synth_binary(&other).unwrap());
    }

    #[test]
    fn normalized_columns_have_unit_norm() {
        let spec = SynthSpec {
            n: 300,
            d: 40,
            density: 0.3,
            feature_decay: 1.0,
            ..Default::default()
        };
        let (a, labels) = synth_binary(&spec).unwrap();
        assert!((a.max_col_norm() - 1.0).abs() <= 1e-12);
        assert!(labels.iter().all(|&b| b == 1.0 || b == -1.0));
        for i in 0..a.ncols() {
            let n2 = a.col_norm_sq(i);
            assert!(n2 == 0.0 || (n2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nnz_concentrates_around_density() {
        // Binomial(10^5, 0.01): mean 1000, sd ≈ 31.5, so ±10% is more than 3 sd.
        let spec = SynthSpec {
            n: 1000,
            d: 100,
            density: 0.01,
            seed: 3,
            ..Default::default()
        };
        let (a, _) = synth_binary(&spec).unwrap();
        let expected = 0.01 * 1000.0 * 100.0;
        assert!(
            (a.nnz() as f64 - expected).abs() <= 0.1 * expected,
            "nnz {}",
            a.nnz()
        );
    }

    #[test]
    fn rejects_bad_density() {
        assert!(synth_binary(&SynthSpec {
            density: 0.0,
            ..Default::default()
        })
        .is_err());
        assert!(synth_binary(&SynthSpec {
            density: 1.5,
            ..Default::default()
        })
        .is_err());
    }
}
