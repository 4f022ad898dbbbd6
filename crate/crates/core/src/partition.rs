//! Partition of the variable vector into coordinate blocks.

use alloc::vec::Vec;
use core::ops::Range;

use crate::{Error, Result};

/// Splits a vector of dimension `N` into `n` contiguous blocks of sizes `N_i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    offsets: Vec<usize>,
}

impl BlockPartition {
    /// Blocks with the given sizes, laid out in order.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInput(
                "a partition needs at least one block".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0);
        let mut end = 0usize;
        for &s in sizes {
            if s == 0 {
                return Err(Error::InvalidInput("block sizes must be positive".into()));
            }
            end += s;
            offsets.push(end);
        }
        Ok(Self { offsets })
    }

    /// `n` blocks of one coordinate each.
    pub fn scalar(n: usize) -> Self {
        assert!(n > 0, "a partition needs at least one block");
        Self {
            offsets: (0..=n).collect(),
        }
    }

    /// Number of blocks `n`.
    #[inline]
    pub fn num_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Total dimension `N`.
    #[inline]
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    #[inline]
    pub fn size(&self, block: usize) -> usize {
        self.offsets[block + 1] - self.offsets[block]
    }

    #[inline]
    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    #[inline]
    pub fn range(&self, block: usize) -> Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    pub fn max_block_size(&self) -> usize {
        (0..self.num_blocks())
            .map(|i| self.size(i))
            .max()
            .unwrap_or(0)
    }

    pub fn is_scalar(&self) -> bool {
        self.dim() == self.num_blocks()
    }

    /// Start index of every block.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets[..self.num_blocks()]
    }

    /// Borrow block `i` of a full vector.
    #[inline]
    pub fn block<'a>(&self, x: &'a [f64], i: usize) -> &'a [f64] {
        &x[self.range(i)]
    }

    #[inline]
    pub fn block_mut<'a>(&self, x: &'a mut [f64], i: usize) -> &'a mut [f64] {
        &mut x[self.range(i)]
    }
}
