use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform periodic grid on [0, 2π)² with `n` points per axis.
///
/// Values are stored row-major: index `r * n + c` holds the sample at
/// `x₁ = c·Δx`, `x₂ = r·Δx`. Spectral coefficients use the same layout with
/// `c` carrying the k₁ frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of samples, n².
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn log2_n(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn period<T: Scalar>(&self) -> T {
        T::lit(2.0) * T::PI()
    }

    pub fn spacing<T: Scalar>(&self) -> T {
        self.period::<T>() / T::from_len(self.n)
    }

    pub fn cell_area<T: Scalar>(&self) -> T {
        let h = self.spacing::<T>();
        h * h
    }

    pub fn coord<T: Scalar>(&self, i: usize) -> T {
        T::from_len(i) * self.spacing::<T>()
    }

    /// Signed integer frequency of index `i` along one axis. The Nyquist
    /// index maps to −n/2.
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        let half = self.n / 2;
        if i < half {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency used by odd-order symbols (derivatives, Riesz transforms):
    /// zero at the Nyquist index so the result stays real.
    #[inline]
    pub fn odd_freq(&self, i: usize) -> i64 {
        if i == self.n / 2 {
            0
        } else {
            self.freq(i)
        }
    }

    /// (k₁, k₂) of a flat index.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        (self.freq(idx % self.n), self.freq(idx / self.n))
    }

    #[inline]
    pub fn k_squared(&self, idx: usize) -> u64 {
        let (k1, k2) = self.wavevector(idx);
        (k1 * k1 + k2 * k2) as u64
    }

    /// Flat index of the wavevector (k₁, k₂), wrapped periodically.
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        let n = self.n as i64;
        let c = k1.rem_euclid(n) as usize;
        let r = k2.rem_euclid(n) as usize;
        r * self.n + c
    }

    /// Flat index of −k.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        let n = self.n;
        let (r, c) = (idx / n, idx % n);
        ((n - r) % n) * n + (n - c) % n
    }

    /// Largest |k_i| retained by the two-thirds rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n as f64 / 3.0
    }

    /// Whether the mode at `idx` survives dealiasing.
    #[inline]
    pub fn retained(&self, idx: usize) -> bool {
        let (k1, k2) = self.wavevector(idx);
        let kmax = k1.unsigned_abs().max(k2.unsigned_abs()) as f64;
        kmax <= self.dealias_cutoff()
    }

    /// Largest |k|² on the grid.
    pub fn max_k_squared(&self) -> u64 {
        let h = (self.n / 2) as u64;
        2 * h * h
    }
}

impl TryFrom<usize> for Grid {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Grid::new(n)
    }
}

impl From<Grid> for usize {
    fn from(g: Grid) -> usize {
        g.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 1, 4, 12, 100] {
            assert!(Grid::new(n).is_err(), "n = {n}");
        }
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn frequencies_are_signed() {
        let g = Grid::new(8).unwrap();
        let f: Vec<i64> = (0..8).map(|i| g.freq(i)).collect();
        assert_eq!(f, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.odd_freq(4), 0);
        assert_eq!(g.wavevector(g.index_of(-3, 2)), (-3, 2));
    }

    #[test]
    fn mirror_negates() {
        let g = Grid::new(16).unwrap();
        for idx in 0..g.len() {
            let (a, b) = g.wavevector(idx);
            let (c, d) = g.wavevector(g.mirror(idx));
            assert_eq!(g.index_of(-a, -b), g.index_of(c, d));
        }
    }
}
