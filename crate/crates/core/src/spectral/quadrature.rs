use num_traits::Float;

use super::field::{PhysicalField, SpectralField};
use crate::error::{Error, Result};
use crate::reduce;
use crate::scalar::Scalar;

/// Midpoint quadrature ∫ f over the torus.
pub fn integrate<T: Scalar>(f: &PhysicalField<T>) -> T {
    reduce::pairwise_sum(f.values()) * f.grid().cell_area::<T>()
}

/// ∫ f·g over the torus.
pub fn inner<T: Scalar>(f: &PhysicalField<T>, g: &PhysicalField<T>) -> Result<T> {
    super::field::check_grid(f.grid(), g.grid())?;
    let (a, b) = (f.values(), g.values());
    Ok(reduce::sum_by(a.len(), |i| a[i] * b[i]) * f.grid().cell_area::<T>())
}

/// L^p norm by grid quadrature; `p = ∞` gives the max norm.
pub fn lp_norm<T: Scalar>(f: &PhysicalField<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
            range: "[1, inf]",
        });
    }
    Ok(lp_norm_values(f.values(), p, f.grid().cell_area::<T>()))
}

pub(crate) fn lp_norm_values<T: Scalar>(v: &[T], p: T, area: T) -> T {
    if p.is_infinite() {
        return reduce::max_by(v.len(), |i| Float::abs(v[i]));
    }
    if p == T::lit(2.0) {
        return (reduce::sum_by(v.len(), |i| v[i] * v[i]) * area).sqrt();
    }
    if p == T::one() {
        return reduce::sum_by(v.len(), |i| Float::abs(v[i])) * area;
    }
    (reduce::sum_by(v.len(), |i| Float::abs(v[i]).powf(p)) * area).powf(p.recip())
}

/// Real part of ∫ f ḡ computed from coefficients: (2π)² Σ_k f̂(k) conj ĝ(k).
pub fn spectral_inner<T: Scalar>(f: &SpectralField<T>, g: &SpectralField<T>) -> Result<T> {
    super::field::check_grid(f.grid(), g.grid())?;
    let (a, b) = (f.coeffs(), g.coeffs());
    let area = f.grid().period::<T>() * f.grid().period::<T>();
    Ok(reduce::sum_by(a.len(), |i| (a[i] * b[i].conj()).re) * area)
}
