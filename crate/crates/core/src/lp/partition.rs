use sha2::{Digest, Sha256};

use super::profile::{self, INNER, OUTER};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::Grid;

/// ρ(√k² / 2^s) tabulated on the transition window of one scale.
#[derive(Debug, Clone)]
struct ScaleTable<T> {
    /// First k² inside the transition; below it ρ = 1.
    lo: u64,
    /// ρ for k² = lo, lo+1, ...; beyond the end ρ = 0.
    values: Vec<T>,
}

/// Dyadic partition of unity tabulated on the wavenumbers of a grid.
///
/// Shells `j` carry φ(2^{−j}|k|) with φ(ξ) = ρ(ξ/2) − ρ(ξ), so shell `j` is
/// supported on 3/4·2^j ≤ |k| ≤ 2^{j+1} and equals 1 on [2^j, 3/2·2^j].
/// Shells with j < 0 vanish on the integer lattice.
///
/// Three indices are kept: `jmin = 0`; `jmax`, the top shell whose support
/// lies inside the dealiased band (used by the Besov and tail diagnostics);
/// and `jtop`, the top shell needed for the blocks to sum to the identity on
/// every grid wavenumber.
#[derive(Debug, Clone)]
pub struct DyadicPartition<T> {
    grid: Grid,
    jmin: i32,
    jmax: i32,
    jtop: i32,
    scales: Vec<ScaleTable<T>>,
}

impl<T: Scalar> DyadicPartition<T> {
    pub fn new(grid: Grid) -> Result<Self> {
        let log2 = grid.log2_n() as i32;
        // top shell inside the two-thirds band: 2^{jmax+1} ≤ n/3
        let jmax = (grid.dealias_cutoff().log2().floor() as i32) - 1;
        let jmin = 0;
        if jmax < jmin {
            return Err(Error::PartitionTooSmall);
        }
        let jtop = log2 - 1;
        let kmax2 = grid.max_k_squared();
        let mut scales = Vec::new();
        let mut s = 0u32;
        loop {
            let r = (1u64 << s) as f64;
            let lo_r2 = (INNER * r).powi(2);
            let hi_r2 = (OUTER * r).powi(2);
            let lo = lo_r2.floor() as u64 + 1;
            let hi = (hi_r2.ceil() as u64).min(kmax2 + 1);
            let values = (lo..hi.max(lo))
                .map(|k2| T::lit(profile::rho((k2 as f64).sqrt() / r)))
                .collect();
            scales.push(ScaleTable { lo, values });
            if lo_r2 >= kmax2 as f64 {
                break;
            }
            s += 1;
        }
        Ok(Self {
            grid,
            jmin,
            jmax,
            jtop,
            scales,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn jmin(&self) -> i32 {
        self.jmin
    }

    pub fn jmax(&self) -> i32 {
        self.jmax
    }

    pub fn jtop(&self) -> i32 {
        self.jtop
    }

    /// Shells used by the Besov and tail diagnostics.
    pub fn diagnostic_shells(&self) -> std::ops::RangeInclusive<i32> {
        self.jmin..=self.jmax
    }

    /// ρ(2^{−s}|k|) at |k|² = `k2`.
    pub fn rho(&self, s: i32, k2: u64) -> T {
        if s <= 0 {
            // |k| ≥ 1 already lies outside the unit ball
            return if k2 == 0 { T::one() } else { T::zero() };
        }
        let Some(table) = self.scales.get(s as usize) else {
            return T::one();
        };
        if k2 < table.lo {
            T::one()
        } else {
            table
                .values
                .get((k2 - table.lo) as usize)
                .copied()
                .unwrap_or_else(T::zero)
        }
    }

    /// φ(2^{−j}|k|) at |k|² = `k2`.
    pub fn phi(&self, j: i32, k2: u64) -> T {
        self.rho(j + 1, k2) - self.rho(j, k2)
    }

    /// Hex SHA-256 of the tabulated profile, for run metadata.
    pub fn profile_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"rho-bump-0.75-1.0");
        h.update((self.grid.n() as u64).to_le_bytes());
        for t in &self.scales {
            h.update(t.lo.to_le_bytes());
            for v in &t.values {
                h.update(v.as_f64().to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub(crate) fn check_homogeneous(&self, j: i32) -> Result<()> {
        if j < self.jmin || j > self.jtop {
            return Err(Error::ShellOutOfRange {
                j,
                lo: self.jmin,
                hi: self.jtop,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_indices_for_common_grids() {
        let p = DyadicPartition::<f64>::new(Grid::new(256).unwrap()).unwrap();
        assert_eq!((p.jmin(), p.jmax(), p.jtop()), (0, 5, 7));
        let p = DyadicPartition::<f64>::new(Grid::new(8).unwrap()).unwrap();
        assert_eq!((p.jmin(), p.jmax(), p.jtop()), (0, 0, 2));
    }

    #[test]
    fn table_matches_profile() {
        let p = DyadicPartition::<f64>::new(Grid::new(64).unwrap()).unwrap();
        for k2 in 0..(2 * 32 * 32) {
            for s in 0..8 {
                let want = profile::rho((k2 as f64).sqrt() / (1u64 << s) as f64);
                assert_eq!(p.rho(s, k2), want, "s = {s}, k2 = {k2}");
            }
        }
    }

    #[test]
    fn hash_is_stable_and_size_dependent() {
        let a = DyadicPartition::<f64>::new(Grid::new(32).unwrap()).unwrap();
        let b = DyadicPartition::<f64>::new(Grid::new(32).unwrap()).unwrap();
        let c = DyadicPartition::<f64>::new(Grid::new(64).unwrap()).unwrap();
        assert_eq!(a.profile_hash(), b.profile_hash());
        assert_ne!(a.profile_hash(), c.profile_hash());
        assert_eq!(a.profile_hash().len(), 64);
    }
}
