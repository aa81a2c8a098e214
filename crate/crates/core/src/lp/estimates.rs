use num_traits::Float;
use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{
    forward, gradient, lp_norm, lp_norm_values, to_physical, PhysicalField, SpectralField,
};

/// Bernstein ratios of a shell-`j` field:
/// (‖∇f‖_p / (2^j‖f‖_p), ‖f‖_q / (2^{2j(1/p−1/q)}‖f‖_p)).
pub fn bernstein_ratios<T: Scalar>(f: &SpectralField<T>, j: i32, p: T, q: T) -> Result<(T, T)> {
    if !(p >= T::one()) || !(q >= p) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q.as_f64(),
            range: "[p, inf] with p >= 1",
        });
    }
    let phys = to_physical(f);
    let norm_p = lp_norm(&phys, p)?;
    if norm_p == T::zero() {
        return Err(Error::EmptyShell);
    }
    let grad_norm = gradient_magnitude_norm(f, p)?;
    let two_j = T::lit(j as f64).exp2();
    let first = grad_norm / (two_j * norm_p);
    let second = if q == p {
        T::one()
    } else {
        let e = T::lit(2.0 * j as f64) * (p.recip() - q.recip());
        lp_norm(&phys, q)? / (e.exp2() * norm_p)
    };
    Ok((first, second))
}

/// ‖ |∇f| ‖_{L^p}.
pub fn gradient_magnitude_norm<T: Scalar>(f: &SpectralField<T>, p: T) -> Result<T> {
    let [d1, d2] = gradient(f);
    let (a, b) = (to_physical(&d1), to_physical(&d2));
    let mag = a.zip_with(&b, |x, y| x.hypot(y))?;
    lp_norm(&mag, p)
}

/// ‖f(· − y) − f‖_{L^p}. Lattice shifts are applied by index; other shifts
/// spectrally.
pub fn increment_norm<T: Scalar>(f: &PhysicalField<T>, y: (T, T), p: T) -> Result<T> {
    let g = f.grid();
    let n = g.n();
    let h = g.spacing::<T>();
    let (s1, s2) = (y.0 / h, y.1 / h);
    let tol = T::lit(1e-9);
    let shifted = if Float::abs(s1 - s1.round()) < tol && Float::abs(s2 - s2.round()) < tol {
        let m1 = (s1.round().as_f64() as i64).rem_euclid(n as i64) as usize;
        let m2 = (s2.round().as_f64() as i64).rem_euclid(n as i64) as usize;
        let v = f.values();
        let out: Vec<T> = (0..g.len())
            .map(|idx| {
                let (r, c) = (idx / n, idx % n);
                v[((r + n - m2) % n) * n + (c + n - m1) % n]
            })
            .collect();
        out
    } else {
        let fh = forward(f);
        let sh = fh.map_modes(|idx, c| {
            let k1 = T::lit(g.odd_freq(idx % n) as f64);
            let k2 = T::lit(g.odd_freq(idx / n) as f64);
            let phase = -(k1 * y.0 + k2 * y.1);
            c * Complex::new(phase.cos(), phase.sin())
        });
        to_physical(&sh).into_values()
    };
    let v = f.values();
    let diff: Vec<T> = shifted.iter().zip(v).map(|(&a, &b)| a - b).collect();
    if !(p >= T::one()) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
            range: "[1, inf]",
        });
    }
    Ok(lp_norm_values(&diff, p, g.cell_area::<T>()))
}
