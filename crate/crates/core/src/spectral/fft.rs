use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::field::{PhysicalField, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

type PlanKey = (TypeId, usize, bool);
type PlanMap = HashMap<PlanKey, Box<dyn Any + Send + Sync>>;

fn plans() -> &'static Mutex<PlanMap> {
    static PLANS: OnceLock<Mutex<PlanMap>> = OnceLock::new();
    PLANS.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan<T: Scalar>(n: usize, direction: FftDirection) -> Arc<dyn Fft<T>> {
    let key = (TypeId::of::<T>(), n, direction == FftDirection::Forward);
    let mut map = plans().lock().unwrap_or_else(|e| e.into_inner());
    let entry = map.entry(key).or_insert_with(|| {
        let p: Arc<dyn Fft<T>> = FftPlanner::<T>::new().plan_fft(n, direction);
        Box::new(p)
    });
    entry
        .downcast_ref::<Arc<dyn Fft<T>>>()
        .expect("plan cache keyed by scalar type")
        .clone()
}

fn rows<T: Scalar>(data: &mut [Complex<T>], n: usize, fft: &Arc<dyn Fft<T>>) {
    let scratch_len = fft.get_inplace_scratch_len();
    data.par_chunks_mut(n).for_each_init(
        || vec![Complex::new(T::zero(), T::zero()); scratch_len],
        |scratch, row| fft.process_with_scratch(row, scratch),
    );
}

fn transpose<T: Scalar>(src: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(c, row)| {
        for (r, v) in row.iter_mut().enumerate() {
            *v = src[r * n + c];
        }
    });
    out
}

/// Unnormalized 2-D transform of row-major data.
pub(crate) fn fft2<T: Scalar>(
    data: Vec<Complex<T>>,
    n: usize,
    direction: FftDirection,
) -> Vec<Complex<T>> {
    let fft = plan::<T>(n, direction);
    let mut data = data;
    rows(&mut data, n, &fft);
    let mut t = transpose(&data, n);
    rows(&mut t, n, &fft);
    transpose(&t, n)
}

/// Forward transform with 1/n² normalization, so `cos(x₁)` has amplitude ½
/// at k = ±(1, 0).
pub fn to_spectral<T: Scalar>(f: &PhysicalField<T>) -> Result<SpectralField<T>> {
    if let Some(index) = f.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(forward(f))
}

pub(crate) fn forward<T: Scalar>(f: &PhysicalField<T>) -> SpectralField<T> {
    let g = f.grid();
    let n = g.n();
    let data: Vec<Complex<T>> = f
        .values()
        .par_iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    let mut out = fft2(data, n, FftDirection::Forward);
    let norm = T::one() / T::from_len(g.len());
    out.par_iter_mut().for_each(|c| *c = *c * norm);
    SpectralField::from_vec_unchecked(g, out)
}

/// Inverse transform; the imaginary part (rounding noise for Hermitian
/// input) is discarded.
pub fn to_physical<T: Scalar>(f: &SpectralField<T>) -> PhysicalField<T> {
    let g = f.grid();
    let out = fft2(f.coeffs().to_vec(), g.n(), FftDirection::Inverse);
    PhysicalField::from_vec_unchecked(g, out.into_par_iter().map(|c| c.re).collect())
}
