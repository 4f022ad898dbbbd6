use alloc::vec::Vec;

use crate::math::powf;

/// Vector whose entries all decay by a common factor `ρ` per tick.
///
/// Entry `j` is stored as a value and the tick at which it was written; its current value
/// is `values[j] · ρ^{now − stamp[j]}`. Ticking is O(1) and touching an entry is O(1), so
/// a global rescaling never has to sweep the vector.
#[derive(Debug, Clone)]
pub struct LazyScaled {
    values: Vec<f64>,
    stamps: Vec<u64>,
    now: u64,
    rho: f64,
    powers: Vec<f64>,
}

impl LazyScaled {
    /// All-zero vector of length `len`; powers `ρ^m` for `m < table_len` are tabulated.
    pub fn zeros(len: usize, rho: f64, table_len: usize) -> Self {
        let powers = (0..table_len.max(1)).map(|m| powf(rho, m as f64)).collect();
        Self {
            values: alloc::vec![0.0; len],
            stamps: alloc::vec![0; len],
            now: 0,
            rho,
            powers,
        }
    }

    #[inline]
    fn factor(&self, gap: u64) -> f64 {
        match self.powers.get(gap as usize) {
            Some(&p) => p,
            None => powf(self.rho, gap as f64),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn now(&self) -> u64 {
        self.now
    }

    /// Current value of entry `j`.
    #[inline]
    pub fn get(&self, j: usize) -> f64 {
        self.values[j] * self.factor(self.now - self.stamps[j])
    }

    /// Sets entry `j` to `v` as of the *next* tick. Entry `j` must not be read again before
    /// [`tick`](Self::tick).
    #[inline]
    pub fn set_next(&mut self, j: usize, v: f64) {
        self.values[j] = v;
        self.stamps[j] = self.now + 1;
    }

    /// Advances time by one factor of `ρ`.
    #[inline]
    pub fn tick(&mut self) {
        self.now += 1;
    }

    /// Materializes every entry into `out`.
    pub fn write_to(&self, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.get(j);
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = alloc::vec![0.0; self.len()];
        self.write_to(&mut v);
        v
    }
}

/// Tabulated powers cover this many ticks of staleness.
pub(crate) fn pow_table_len(n: usize) -> usize {
    (8 * n).clamp(1, 65_536)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_eager_scaling() {
        let rho = 0.9;
        let mut lazy = LazyScaled::zeros(3, rho, 4);
        let mut eager = [0.0; 3];
        let writes = [(0, 1.0), (1, -2.0), (0, 3.0), (2, 0.5), (1, 1.0)];
        for (t, &(j, v)) in writes.iter().enumerate() {
            let next = lazy.get(j) * rho + v;
            lazy.set_next(j, next);
            for (k, e) in eager.iter_mut().enumerate() {
                *e = if k == j { next } else { *e * rho };
            }
            lazy.tick();
            for _ in 0..t {
                lazy.tick();
                for e in eager.iter_mut() {
                    *e *= rho;
                }
            }
            for k in 0..3 {
                assert!((lazy.get(k) - eager[k]).abs() < 1e-14);
            }
        }
    }
}
