use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::blocks::{dyadic_block, BlockKind};
use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{lp_norm, to_physical, SpectralField};

/// One row of a shell profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellEntry {
    pub j: i32,
    pub raw_norm: f64,
    pub weighted_norm: f64,
}

/// The sequence j ↦ (‖Δ̇_j f‖_{L^p}, 2^{jα}‖Δ̇_j f‖_{L^p}).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellNormProfile {
    pub p: f64,
    pub alpha: f64,
    pub entries: Vec<ShellEntry>,
}

impl ShellNormProfile {
    /// Builds a profile from raw norms, sorting by shell.
    pub fn from_raw(p: f64, alpha: f64, raw: impl IntoIterator<Item = (i32, f64)>) -> Self {
        let mut entries: Vec<ShellEntry> = raw
            .into_iter()
            .map(|(j, r)| ShellEntry {
                j,
                raw_norm: r,
                weighted_norm: (j as f64 * alpha).exp2() * r,
            })
            .collect();
        entries.sort_by_key(|e| e.j);
        Self { p, alpha, entries }
    }

    /// Builds a profile directly from a weighted sequence.
    pub fn from_weighted(
        p: f64,
        alpha: f64,
        weighted: impl IntoIterator<Item = (i32, f64)>,
    ) -> Self {
        Self::from_raw(
            p,
            alpha,
            weighted
                .into_iter()
                .map(|(j, w)| (j, w * (-(j as f64) * alpha).exp2())),
        )
    }

    pub fn weighted(&self, j: i32) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.j == j)
            .map(|e| e.weighted_norm)
    }

    /// Finite proxy for the c(ℕ) condition: the last ⌈len/3⌉ weighted values
    /// are decreasing (ties allowed only at zero) and the final one is below
    /// `tol`.
    pub fn satisfies_cn(&self, tol: f64) -> bool {
        let Some(last) = self.entries.last() else {
            return false;
        };
        let span = (last.j - self.entries[0].j).max(0) as usize;
        let m = span.div_ceil(3).max(1);
        let tail = &self.entries[self.entries.len().saturating_sub(m)..];
        let decreasing = tail.windows(2).all(|w| {
            w[1].weighted_norm < w[0].weighted_norm
                || (w[0].weighted_norm == 0.0 && w[1].weighted_norm == 0.0)
        });
        decreasing && last.weighted_norm < tol
    }

    /// CSV with columns j, raw_norm, weighted_norm.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,raw_norm,weighted_norm\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{}", e.j, e.raw_norm, e.weighted_norm);
        }
        s
    }
}

/// ‖Δ̇_j f‖_{L^p} for each diagnostic shell.
pub fn shell_norms<T: Scalar>(
    f: &SpectralField<T>,
    p: T,
    partition: &DyadicPartition<T>,
) -> Result<Vec<(i32, T)>> {
    check_p(p)?;
    partition
        .diagnostic_shells()
        .map(|j| {
            let b = dyadic_block(f, j, partition, BlockKind::Homogeneous)?;
            Ok((j, lp_norm(&to_physical(&b), p)?))
        })
        .collect()
}

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if !(p >= T::one()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
            range: "[1, inf]",
        });
    }
    Ok(())
}

/// ℓ^r aggregate of a sequence; `r = ∞` takes the maximum.
fn ell_r<T: Scalar>(xs: impl Iterator<Item = T>, r: T) -> T {
    if r.is_infinite() {
        xs.fold(T::zero(), |a, b| a.max(b))
    } else {
        xs.map(|x| x.powf(r))
            .fold(T::zero(), |a, b| a + b)
            .powf(r.recip())
    }
}

/// Besov norm over the diagnostic shells. The nonhomogeneous kind is
/// ‖f‖_{L^p} plus the homogeneous norm.
pub fn besov_norm<T: Scalar>(
    f: &SpectralField<T>,
    s: T,
    p: T,
    r: T,
    kind: BlockKind,
    partition: &DyadicPartition<T>,
) -> Result<T> {
    check_p(p)?;
    if !(r >= T::one()) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r.as_f64(),
            range: "[1, inf]",
        });
    }
    let norms = shell_norms(f, p, partition)?;
    let hom = ell_r(
        norms
            .iter()
            .map(|&(j, v)| (s * T::lit(j as f64)).exp2() * v),
        r,
    );
    match kind {
        BlockKind::Homogeneous => Ok(hom),
        BlockKind::Nonhomogeneous => Ok(lp_norm(&to_physical(f), p)? + hom),
    }
}

/// The weighted tail sequence 2^{jα}‖Δ̇_j f‖_{L^p}.
pub fn cn_tail_profile<T: Scalar>(
    f: &SpectralField<T>,
    alpha: T,
    p: T,
    partition: &DyadicPartition<T>,
) -> Result<ShellNormProfile> {
    let norms = shell_norms(f, p, partition)?;
    Ok(ShellNormProfile::from_raw(
        p.as_f64(),
        alpha.as_f64(),
        norms.into_iter().map(|(j, v)| (j, v.as_f64())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cn_verdict() {
        let flat = ShellNormProfile::from_weighted(2.0, 0.5, (0..6).map(|j| (j, 1.0)));
        assert!(!flat.satisfies_cn(0.0));
        assert!(!flat.satisfies_cn(2.0));
        let decaying =
            ShellNormProfile::from_weighted(2.0, 0.5, (0..6).map(|j| (j, (-(j as f64)).exp2())));
        assert!(decaying.satisfies_cn(0.1));
        assert!(!decaying.satisfies_cn(0.01));
        let zero_tail =
            ShellNormProfile::from_weighted(2.0, 0.5, [(0, 1.0), (1, 0.5), (2, 0.0), (3, 0.0)]);
        assert!(zero_tail.satisfies_cn(1e-12));
    }

    #[test]
    fn csv_layout() {
        let p = ShellNormProfile::from_raw(2.0, 1.0, [(1, 0.5), (0, 1.0)]);
        assert_eq!(p.to_csv(), "j,raw_norm,weighted_norm\n0,1,1\n1,0.5,1\n");
    }
}
