use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{check_grid, SpectralField};

/// Homogeneous blocks Δ̇_j use φ for every j; nonhomogeneous blocks Δ_j use
/// ρ for j = −1 and φ for j ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Homogeneous,
    Nonhomogeneous,
}

pub fn dyadic_block<T: Scalar>(
    f: &SpectralField<T>,
    j: i32,
    partition: &DyadicPartition<T>,
    kind: BlockKind,
) -> Result<SpectralField<T>> {
    check_grid(f.grid(), partition.grid())?;
    let g = f.grid();
    match kind {
        BlockKind::Homogeneous => partition.check_homogeneous(j)?,
        BlockKind::Nonhomogeneous => {
            if j == -1 {
                return Ok(f.multiply_by(|idx| partition.rho(0, g.k_squared(idx))));
            }
            if j < -1 || j > partition.jtop() {
                return Err(Error::ShellOutOfRange {
                    j,
                    lo: -1,
                    hi: partition.jtop(),
                });
            }
        }
    }
    Ok(f.multiply_by(|idx| partition.phi(j, g.k_squared(idx))))
}

/// S_N = ρ(2^{−N}D).
pub fn low_pass<T: Scalar>(
    f: &SpectralField<T>,
    n: i32,
    partition: &DyadicPartition<T>,
) -> Result<SpectralField<T>> {
    check_grid(f.grid(), partition.grid())?;
    if n < 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: n as f64,
            range: "[0, inf)",
        });
    }
    let g = f.grid();
    Ok(f.multiply_by(|idx| partition.rho(n, g.k_squared(idx))))
}
