use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::checkpoint::read_checkpoint;
use super::state::SolverState;
use crate::diagnostics::{synthesize_besov_field, SyntheticLaw, SyntheticSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{dealias, Grid, SpectralField};

fn unit_x() -> [i64; 2] {
    [1, 0]
}

fn one() -> f64 {
    1.0
}

fn four() -> f64 {
    4.0
}

fn three() -> f64 {
    3.0
}

/// Initial datum for a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// A cos(k·x). Every single Fourier mode is a steady state since v ⟂ ∇θ.
    SteadyMode {
        #[serde(default = "unit_x")]
        k: [i64; 2],
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// A cos(k·x + phase).
    SingleMode {
        #[serde(default = "unit_x")]
        k: [i64; 2],
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Gaussian spectrum exp(−|k|²/(2k₀²)) with normal random coefficients,
    /// dealiased, mean free, rescaled to the given rms.
    SmoothRandom {
        #[serde(default = "four")]
        peak: f64,
        #[serde(default = "one")]
        rms: f64,
    },
    /// Synthetic field with a flat 2^{jα}‖Δ̇_jθ‖_{L^q} profile.
    Besov {
        alpha: f64,
        #[serde(default = "three")]
        norm_exponent: f64,
        #[serde(default)]
        law: SyntheticLaw,
        #[serde(default)]
        levels: Option<(i32, i32)>,
    },
    /// Text file of `k1,k2,re,im` lines, one per conjugate pair; the partner
    /// −k is filled in.
    SpectralDump {
        path: PathBuf,
    },
    Checkpoint {
        path: PathBuf,
    },
    Zero,
}

impl InitialCondition {
    pub fn is_stochastic(&self) -> bool {
        matches!(self, Self::SmoothRandom { .. } | Self::Besov { .. })
    }

    /// Builds the state at t = 0 (or at the stored time for checkpoints).
    pub fn build<T: Scalar>(
        &self,
        grid: Grid,
        gamma: T,
        seed: Option<u64>,
    ) -> Result<SolverState<T>> {
        let need_seed = || {
            seed.ok_or_else(|| Error::config("seed", "required for stochastic initial conditions"))
        };
        let theta = match self {
            Self::SteadyMode { k, amplitude } => cosine(grid, *k, *amplitude, 0.0)?,
            Self::SingleMode {
                k,
                amplitude,
                phase,
            } => cosine(grid, *k, *amplitude, *phase)?,
            Self::SmoothRandom { peak, rms } => smooth_random(grid, *peak, *rms, need_seed()?)?,
            Self::Besov {
                alpha,
                norm_exponent,
                law,
                levels,
            } => {
                let mut spec =
                    SyntheticSpec::new(*alpha, *norm_exponent, need_seed()?).with_law(law.clone());
                spec.levels = *levels;
                synthesize_besov_field::<T>(&spec, grid)?.spectrum
            }
            Self::SpectralDump { path } => spectral_dump(grid, path)?,
            Self::Checkpoint { path } => {
                let state = read_checkpoint::<T>(path)?;
                if state.theta.grid() != grid {
                    return Err(Error::GridMismatch(state.theta.grid().n(), grid.n()));
                }
                return Ok(state);
            }
            Self::Zero => SpectralField::zeros(grid),
        };
        SolverState::new(theta, gamma)
    }
}

fn cosine<T: Scalar>(
    grid: Grid,
    k: [i64; 2],
    amplitude: f64,
    phase: f64,
) -> Result<SpectralField<T>> {
    let half = grid.n() as i64 / 2;
    if k == [0, 0] || k.iter().any(|c| c.abs() >= half) {
        return Err(Error::OutOfRange {
            name: "k",
            value: k[0].abs().max(k[1].abs()) as f64,
            range: "nonzero, |k_i| < n/2",
        });
    }
    let c = Complex::from_polar(amplitude / 2.0, phase);
    Ok(SpectralField::from_modes(
        grid,
        &[(k[0], k[1], Complex::new(T::lit(c.re), T::lit(c.im)))],
    ))
}

fn smooth_random<T: Scalar>(
    grid: Grid,
    peak: f64,
    rms: f64,
    seed: u64,
) -> Result<SpectralField<T>> {
    if !(peak > 0.0) || !(rms >= 0.0) {
        return Err(Error::OutOfRange {
            name: "peak",
            value: peak,
            range: "(0, inf)",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for idx in 0..grid.len() {
        let (k1, k2) = grid.wavevector(idx);
        // one representative per conjugate pair
        if k2 < 0 || (k2 == 0 && k1 <= 0) || !grid.retained(idx) || grid.mirror(idx) == idx {
            continue;
        }
        let env = (-(grid.k_squared(idx) as f64) / (2.0 * peak * peak)).exp();
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        modes.push((k1, k2, Complex::new(T::lit(env * re), T::lit(env * im))));
    }
    let f = dealias(&SpectralField::from_modes(grid, &modes));
    // ‖θ‖_{L²}/(2π) = sqrt(Σ|θ̂|²)
    let current = f.power_sum().sqrt();
    if current == T::zero() {
        return Ok(f);
    }
    Ok(f.scale(T::lit(rms) / current))
}

fn spectral_dump<T: Scalar>(grid: Grid, path: &std::path::Path) -> Result<SpectralField<T>> {
    let text = fs::read_to_string(path)?;
    let mut modes = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("k1") {
            continue;
        }
        let bad = || {
            Error::config(
                path.display().to_string(),
                format!("line {}: expected k1,k2,re,im", no + 1),
            )
        };
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let k1: i64 = parts[0].parse().map_err(|_| bad())?;
        let k2: i64 = parts[1].parse().map_err(|_| bad())?;
        let re: f64 = parts[2].parse().map_err(|_| bad())?;
        let im: f64 = parts[3].parse().map_err(|_| bad())?;
        let half = grid.n() as i64 / 2;
        if k1.abs() >= half || k2.abs() >= half || !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        modes.push((k1, k2, Complex::new(T::lit(re), T::lit(im))));
    }
    Ok(SpectralField::from_modes(grid, &modes))
}
