//! Compressed sparse column storage for the data matrix `A = [A_1, …, A_n]`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};

use crate::error::check_len;
use crate::math::sqrt;
use crate::{Error, Result};

/// `d × n` matrix in compressed sparse column layout. Column `i` is example `A_i`.
///
/// Row indices are strictly increasing within each column and stored values are finite
/// and nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseColMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Column-norm statistics of a data matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats {
    /// `R = max_i ‖A_i‖₂`.
    pub max_col_norm: f64,
    /// `‖A‖₂`, estimated by power iteration.
    pub spectral_norm: f64,
}

impl SparseColMatrix {
    pub fn new(
        nrows: usize,
        ncols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_len(ncols + 1, col_ptr.len())?;
        check_len(row_idx.len(), values.len())?;
        if col_ptr[0] != 0 || col_ptr[ncols] != row_idx.len() {
            return Err(Error::InvalidInput(
                "column pointers do not span the entries".into(),
            ));
        }
        for c in 0..ncols {
            let (s, e) = (col_ptr[c], col_ptr[c + 1]);
            if s > e {
                return Err(Error::InvalidInput(
                    "column pointers must be non-decreasing".into(),
                ));
            }
            let rows = &row_idx[s..e];
            if rows.iter().any(|&r| r >= nrows) {
                return Err(Error::InvalidInput(alloc::format!(
                    "row index out of range in column {c}"
                )));
            }
            if rows.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(alloc::format!(
                    "row indices of column {c} are not strictly increasing"
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(Error::InvalidInput(
                "stored values must be finite and nonzero".into(),
            ));
        }
        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from per-column `(row, value)` lists; explicit zeros are dropped.
    pub fn from_columns(nrows: usize, columns: &[Vec<(usize, f64)>]) -> Result<Self> {
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for col in columns {
            for &(r, v) in col {
                if v != 0.0 {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Self::new(nrows, columns.len(), col_ptr, row_idx, values)
    }

    /// Builds a matrix from a dense column-major array.
    pub fn from_dense_col_major(nrows: usize, ncols: usize, data: &[f64]) -> Result<Self> {
        check_len(nrows * ncols, data.len())?;
        let cols: Vec<Vec<(usize, f64)>> = (0..ncols)
            .map(|c| (0..nrows).map(|r| (r, data[c * nrows + r])).collect())
            .collect();
        Self::from_columns(nrows, &cols)
    }

    pub fn empty() -> Self {
        Self {
            nrows: 0,
            ncols: 0,
            col_ptr: vec![0],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Rows `d`.
    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Columns `n`.
    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `nnz / (n·d)`; zero for an empty matrix.
    pub fn density(&self) -> f64 {
        if self.nrows == 0 || self.ncols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.nrows as f64 * self.ncols as f64)
        }
    }

    /// Row indices and values of column `i`.
    #[inline]
    pub fn col(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.col_ptr[i], self.col_ptr[i + 1]);
        (&self.row_idx[s..e], &self.values[s..e])
    }

    #[inline]
    pub fn col_dot(&self, i: usize, y: &[f64]) -> f64 {
        let (rows, vals) = self.col(i);
        rows.iter().zip(vals).map(|(&r, &v)| v * y[r]).sum()
    }

    /// `y += a · A_i`.
    #[inline]
    pub fn col_axpy(&self, i: usize, a: f64, y: &mut [f64]) {
        let (rows, vals) = self.col(i);
        for (&r, &v) in rows.iter().zip(vals) {
            y[r] += a * v;
        }
    }

    #[inline]
    pub fn col_norm_sq(&self, i: usize) -> f64 {
        self.col(i).1.iter().map(|v| v * v).sum()
    }

    /// `out = A x`.
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                self.col_axpy(i, xi, out);
            }
        }
    }

    /// `out = Aᵀ y`.
    pub fn t_matvec(&self, y: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.col_dot(i, y);
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        scaled_norm(&self.values)
    }

    /// Multiplies column `i` by `scale[i]` (e.g. labels `b_i ∈ {±1}`).
    pub fn scale_columns(&mut self, scale: &[f64]) -> Result<()> {
        check_len(self.ncols, scale.len())?;
        if scale.iter().any(|s| !s.is_finite() || *s == 0.0) {
            return Err(Error::InvalidInput(
                "column scales must be finite and nonzero".into(),
            ));
        }
        for (c, &s) in scale.iter().enumerate() {
            let (b, e) = (self.col_ptr[c], self.col_ptr[c + 1]);
            self.values[b..e].iter_mut().for_each(|v| *v *= s);
        }
        Ok(())
    }

    /// `R = max_i ‖A_i‖₂` (zero for a matrix without columns).
    pub fn max_col_norm(&self) -> f64 {
        (0..self.ncols)
            .map(|i| scaled_norm(self.col(i).1))
            .fold(0.0, f64::max)
    }

    /// `‖A‖₂` by power iteration on `AᵀA`, stopping once the estimate changes by less
    /// than `1e-14` relative.
    pub fn spectral_norm(&self) -> f64 {
        if self.nnz() == 0 {
            return 0.0;
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_a11c_e5ee_d5ee);
        let mut v: Vec<f64> = (0..self.ncols)
            .map(|_| rng.random_range(0.5..1.5))
            .collect();
        let mut av = vec![0.0; self.nrows];
        let mut atav = vec![0.0; self.ncols];
        let mut estimate = 0.0;
        for _ in 0..100_000 {
            let nv = scaled_norm(&v);
            if nv == 0.0 {
                break;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            self.matvec(&v, &mut av);
            let next = scaled_norm(&av);
            if next == 0.0 {
                return estimate;
            }
            av.iter_mut().for_each(|x| *x /= next);
            self.t_matvec(&av, &mut atav);
            let done = (next - estimate).abs() <= 1e-14 * next;
            estimate = next;
            core::mem::swap(&mut v, &mut atav);
            if done {
                break;
            }
        }
        estimate
    }

    pub fn column_stats(&self) -> ColumnStats {
        ColumnStats {
            max_col_norm: self.max_col_norm(),
            spectral_norm: self.spectral_norm(),
        }
    }
}

/// Euclidean norm without overflow or underflow in the squares.
fn scaled_norm(x: &[f64]) -> f64 {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * sqrt(x.iter().map(|v| (v / m) * (v / m)).sum())
}
