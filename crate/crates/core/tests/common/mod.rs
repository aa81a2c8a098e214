#![allow(dead_code)]

use gsqg_core::{Complex, Grid, PhysicalField, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hermitian random spectrum with Gaussian envelope exp(−|k|²/(2k₀²)),
/// restricted to the dealiased band, zero mean.
pub fn smooth_spectrum(grid: Grid, k0: f64, seed: u64) -> SpectralField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    let c = grid.dealias_cutoff() as i64;
    for k2 in 0..=c {
        for k1 in -c..=c {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let env = (-((k1 * k1 + k2 * k2) as f64) / (2.0 * k0 * k0)).exp();
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            modes.push((k1, k2, Complex::new(env * re, env * im)));
        }
    }
    SpectralField::from_modes(grid, &modes)
}

pub fn smooth_field(grid: Grid, k0: f64, seed: u64) -> PhysicalField<f64> {
    gsqg_core::spectral::to_physical(&smooth_spectrum(grid, k0, seed))
}

/// Uniform random samples in [−1, 1].
pub fn noise(grid: Grid, seed: u64) -> PhysicalField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PhysicalField::new(grid, v).unwrap()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn spec_diff(a: &SpectralField<f64>, b: &SpectralField<f64>) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
