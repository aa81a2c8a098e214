use num_traits::Float;
use rayon::prelude::*;
use rustfft::num_complex::Complex;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::reduce;
use crate::scalar::Scalar;

/// Real samples on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField<T> {
    grid: Grid,
    values: Vec<T>,
}

impl<T: Scalar> PhysicalField<T> {
    /// Wraps samples, checking length and finiteness.
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: Grid, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, T::zero())
    }

    pub fn constant(grid: Grid, c: T) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x₁, x₂)` at the grid nodes.
    pub fn from_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(T, T) -> T + Sync,
    {
        let n = grid.n();
        let mut values = vec![T::zero(); grid.len()];
        values.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
            let x2 = grid.coord::<T>(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v = f(grid.coord::<T>(c), x2);
            }
        });
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Sample at column `c` (x₁ index) and row `r` (x₂ index).
    #[inline]
    pub fn get(&self, c: usize, r: usize) -> T {
        self.values[r * self.grid.n() + c]
    }

    pub fn map<F: Fn(T) -> T + Sync>(&self, f: F) -> Self {
        Self {
            grid: self.grid,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with<F: Fn(T, T) -> T + Sync>(&self, other: &Self, f: F) -> Result<Self> {
        check_grid(self.grid, other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> T {
        reduce::max_by(self.values.len(), |i| Float::abs(self.values[i]))
    }

    pub fn is_finite(&self) -> bool {
        self.values.par_iter().all(|v| v.is_finite())
    }
}

/// Fourier coefficients of a real field, normalized as mode amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    grid: Grid,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> SpectralField<T> {
    pub fn new(grid: Grid, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_vec_unchecked(grid: Grid, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    /// Builds a field from a list of (k₁, k₂, amplitude) modes; the
    /// conjugate partner of each mode is added automatically.
    pub fn from_modes(grid: Grid, modes: &[(i64, i64, Complex<T>)]) -> Self {
        let mut out = Self::zeros(grid);
        for &(k1, k2, a) in modes {
            let i = grid.index_of(k1, k2);
            let j = grid.index_of(-k1, -k2);
            out.coeffs[i] = out.coeffs[i] + a;
            out.coeffs[j] = out.coeffs[j] + a.conj();
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    pub fn coeff(&self, k1: i64, k2: i64) -> Complex<T> {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    /// The zero mode, equal to the spatial mean.
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    /// Applies `f(idx, c)` to every coefficient.
    pub fn map_modes<F>(&self, f: F) -> Self
    where
        F: Fn(usize, Complex<T>) -> Complex<T> + Sync,
    {
        let n = self.grid.n();
        let mut coeffs = self.coeffs.clone();
        coeffs.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
            for (c, v) in row.iter_mut().enumerate() {
                *v = f(r * n + c, *v);
            }
        });
        Self {
            grid: self.grid,
            coeffs,
        }
    }

    /// Multiplies each coefficient by a real symbol `m(idx)`.
    pub fn multiply_by<F>(&self, m: F) -> Self
    where
        F: Fn(usize) -> T + Sync,
    {
        self.map_modes(|idx, c| c * m(idx))
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex<T>, Complex<T>) -> Complex<T> + Sync,
    {
        check_grid(self.grid, other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .par_iter()
                .zip(other.coeffs.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map_modes(|_, c| c * s)
    }

    /// Σ_k |c_k|²; times (2π)² this is ‖f‖₂².
    pub fn power_sum(&self) -> T {
        reduce::sum_by(self.coeffs.len(), |i| self.coeffs[i].norm_sqr())
    }

    /// L² norm by Parseval.
    pub fn l2_norm(&self) -> T {
        let area = self.grid.period::<T>() * self.grid.period::<T>();
        (self.power_sum() * area).sqrt()
    }

    /// max_k |c(−k) − conj c(k)| relative to max_k |c(k)| (0 for the zero field).
    pub fn hermitian_defect(&self) -> T {
        let g = self.grid;
        let scale = reduce::max_by(self.coeffs.len(), |i| self.coeffs[i].norm());
        if scale == T::zero() {
            return T::zero();
        }
        let d = reduce::max_by(self.coeffs.len(), |i| {
            (self.coeffs[g.mirror(i)] - self.coeffs[i].conj()).norm()
        });
        d / scale
    }

    /// Replaces c(k) by the average of c(k) and conj c(−k).
    pub fn symmetrize(&self) -> Self {
        let g = self.grid;
        let half = T::lit(0.5);
        let src = &self.coeffs;
        self.map_modes(|i, c| (c + src[g.mirror(i)].conj()) * half)
    }

    pub fn max_abs(&self) -> T {
        reduce::max_by(self.coeffs.len(), |i| self.coeffs[i].norm())
    }
}

pub(crate) fn check_grid(a: Grid, b: Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(a.n(), b.n()));
    }
    Ok(())
}
