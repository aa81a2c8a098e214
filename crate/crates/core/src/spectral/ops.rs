use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::fft::{forward, to_physical};
use super::field::{check_grid, PhysicalField, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Treatment of the zero mode under negative-order operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroModePolicy {
    /// Reject fields with a nonzero mean.
    Strict,
    /// Zero the mean silently.
    #[default]
    Lenient,
}

/// Spatial axis, x₁ or x₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn both() -> [Axis; 2] {
        [Axis::X1, Axis::X2]
    }
}

fn i_times<T: Scalar>(c: Complex<T>, k: T) -> Complex<T> {
    Complex::new(-c.im * k, c.re * k)
}

/// Λ^s: multiplies coefficient k by |k|^s.
pub fn fractional_laplacian<T: Scalar>(
    f: &SpectralField<T>,
    s: T,
    policy: ZeroModePolicy,
) -> Result<SpectralField<T>> {
    if !(s >= T::lit(-2.0) && s <= T::lit(4.0)) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s.as_f64(),
            range: "[-2, 4]",
        });
    }
    if s == T::zero() {
        return Ok(f.clone());
    }
    if s < T::zero()
        && policy == ZeroModePolicy::Strict
        && f.coeffs()[0] != Complex::new(T::zero(), T::zero())
    {
        return Err(Error::NonMeanFree);
    }
    let g = f.grid();
    let half = s * T::lit(0.5);
    Ok(f.multiply_by(|idx| {
        let k2 = g.k_squared(idx);
        if k2 == 0 {
            T::zero()
        } else {
            T::lit(k2 as f64).powf(half)
        }
    }))
}

/// v = R⊥Λ^{γ−1}θ, i.e. v̂ = i(k₂, −k₁)|k|^{γ−2}θ̂ with v̂(0) = 0.
pub fn riesz_perp_velocity<T: Scalar>(
    theta: &SpectralField<T>,
    gamma: T,
) -> Result<[SpectralField<T>; 2]> {
    check_gamma(gamma)?;
    let g = theta.grid();
    let e = (gamma - T::lit(2.0)) * T::lit(0.5);
    let symbol = |idx: usize| {
        let k2 = g.k_squared(idx);
        if k2 == 0 {
            T::zero()
        } else {
            T::lit(k2 as f64).powf(e)
        }
    };
    let n = g.n();
    let v1 = theta.map_modes(|idx, c| {
        let k = T::lit(g.odd_freq(idx / n) as f64);
        i_times(c, k * symbol(idx))
    });
    let v2 = theta.map_modes(|idx, c| {
        let k = T::lit(g.odd_freq(idx % n) as f64);
        i_times(c, -k * symbol(idx))
    });
    Ok([v1, v2])
}

pub(crate) fn check_gamma<T: Scalar>(gamma: T) -> Result<()> {
    if !(gamma >= T::zero() && gamma <= T::lit(2.0)) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma.as_f64(),
            range: "[0, 2]",
        });
    }
    Ok(())
}

/// ∂_axis: multiplies coefficient k by i·k_axis (Nyquist frequency zeroed).
pub fn partial_derivative<T: Scalar>(f: &SpectralField<T>, axis: Axis) -> SpectralField<T> {
    let g = f.grid();
    let n = g.n();
    f.map_modes(|idx, c| {
        let k = match axis {
            Axis::X1 => g.odd_freq(idx % n),
            Axis::X2 => g.odd_freq(idx / n),
        };
        i_times(c, T::lit(k as f64))
    })
}

pub fn gradient<T: Scalar>(f: &SpectralField<T>) -> [SpectralField<T>; 2] {
    [
        partial_derivative(f, Axis::X1),
        partial_derivative(f, Axis::X2),
    ]
}

/// Spectral divergence ∂₁a + ∂₂b.
pub fn divergence<T: Scalar>(
    a: &SpectralField<T>,
    b: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    partial_derivative(a, Axis::X1).add(&partial_derivative(b, Axis::X2))
}

/// Two-thirds rule: zeroes modes with max(|k₁|, |k₂|) > n/3.
pub fn dealias<T: Scalar>(f: &SpectralField<T>) -> SpectralField<T> {
    let g = f.grid();
    let zero = Complex::new(T::zero(), T::zero());
    f.map_modes(|idx, c| if g.retained(idx) { c } else { zero })
}

/// dealias(F(ab)) for band-limited a, b given in spectral form.
pub fn dealiased_product<T: Scalar>(
    a: &SpectralField<T>,
    b: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    check_grid(a.grid(), b.grid())?;
    let pa = to_physical(a);
    let pb = to_physical(b);
    Ok(dealias(&forward(&pa.mul(&pb)?)))
}

/// dealias(F(ab)) for fields already in physical space.
pub fn dealiased_product_physical<T: Scalar>(
    a: &PhysicalField<T>,
    b: &PhysicalField<T>,
) -> Result<SpectralField<T>> {
    Ok(dealias(&forward(&a.mul(b)?)))
}
