use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{shell_norms, DyadicPartition};
use crate::scalar::Scalar;
use crate::spectral::{to_physical, Grid, PhysicalField, SpectralField};

/// Largest relative spread of the calibrated profile around its geometric mean.
pub const CALIBRATION_TOLERANCE: f64 = 0.10;
/// Fixed-point sweeps allowed before calibration gives up.
pub const MAX_SWEEPS: usize = 5;

/// How the random field is laid out in wavenumber space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SyntheticLaw {
    /// Self-similar lacunary sum Σ_j a_j Σ_m A_m cos(2^j m·x + φ_m) over the
    /// half-plane lattice vectors m with `mother_min ≤ |m| < mother_max`.
    /// Amplitudes A_m ∈ [1/2, 1] and phases φ_m are drawn once from the seed.
    Lacunary { mother_min: f64, mother_max: f64 },
    /// Independent random phases on every lattice point of the annulus
    /// 2^j ≤ |k| < 2^{j+1}, unit modulus, scaled by a_j.
    Shell,
}

impl Default for SyntheticLaw {
    fn default() -> Self {
        SyntheticLaw::Lacunary {
            mother_min: 1.0,
            mother_max: 3.0,
        }
    }
}

/// Recipe for a random field whose weighted shell profile
/// 2^{jα}‖Δ̇_jθ‖_{L^q} is flat across the generated levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub alpha: f64,
    /// Lebesgue exponent q of the calibration norm.
    pub norm_exponent: f64,
    pub seed: u64,
    /// Inclusive level range; defaults to every level that fits in the
    /// dealiased band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<(i32, i32)>,
    #[serde(default)]
    pub law: SyntheticLaw,
}

impl SyntheticSpec {
    pub fn new(alpha: f64, norm_exponent: f64, seed: u64) -> Self {
        Self {
            alpha,
            norm_exponent,
            seed,
            levels: None,
            law: SyntheticLaw::default(),
        }
    }

    pub fn with_law(mut self, law: SyntheticLaw) -> Self {
        self.law = law;
        self
    }

    pub fn with_levels(mut self, lo: i32, hi: i32) -> Self {
        self.levels = Some((lo, hi));
        self
    }

    /// Level range actually used on `grid`.
    pub fn level_range(&self, grid: Grid) -> Result<(i32, i32)> {
        let cutoff = grid.dealias_cutoff();
        let top = match &self.law {
            SyntheticLaw::Lacunary { .. } => {
                let reach = mother(self)?
                    .iter()
                    .map(|m| m.0.abs().max(m.1.abs()))
                    .max()
                    .unwrap_or(1) as f64;
                (cutoff / reach).log2().floor() as i32
            }
            SyntheticLaw::Shell => (cutoff.log2().floor() as i32) - 1,
        };
        let (lo, hi) = self.levels.unwrap_or((0, top));
        if lo < 0 || hi < lo || hi > top {
            return Err(Error::OutOfRange {
                name: "levels",
                value: hi as f64,
                range: "within the dealiased band",
            });
        }
        Ok((lo, hi))
    }

    /// Shells held to the flatness tolerance. A mother annulus reaching past
    /// |m| = 2 spills each level into the next shell up, so the lowest
    /// `spill` shells miss the contribution of nonexistent coarser levels
    /// and are left out.
    pub fn calibrated_shells(&self, grid: Grid) -> Result<(i32, i32)> {
        let (lo, hi) = self.level_range(grid)?;
        let spill = match self.law {
            SyntheticLaw::Lacunary { mother_max, .. } => {
                (mother_max.log2().ceil() as i32 - 1).max(0)
            }
            SyntheticLaw::Shell => 0,
        };
        Ok(((lo + spill).min(hi), hi))
    }
}

type Mode = (i64, i64);

fn mother(spec: &SyntheticSpec) -> Result<Vec<Mode>> {
    let SyntheticLaw::Lacunary {
        mother_min,
        mother_max,
    } = spec.law
    else {
        return Ok(Vec::new());
    };
    if !(mother_min >= 1.0 && mother_max > mother_min) {
        return Err(Error::OutOfRange {
            name: "mother_max",
            value: mother_max,
            range: "mother_max > mother_min >= 1",
        });
    }
    let h = mother_max.ceil() as i64;
    let mut out = Vec::new();
    for b in 0..=h {
        for a in -h..=h {
            if b == 0 && a <= 0 {
                continue;
            }
            let r = ((a * a + b * b) as f64).sqrt();
            if r >= mother_min && r < mother_max {
                out.push((a, b));
            }
        }
    }
    if out.is_empty() {
        return Err(Error::OutOfRange {
            name: "mother_max",
            value: mother_max,
            range: "an annulus containing lattice points",
        });
    }
    Ok(out)
}

/// Seeded mode table: (k, amplitude, phase) for every level, amplitudes
/// before the level factor a_j.
fn mode_table(
    spec: &SyntheticSpec,
    grid: Grid,
    levels: (i32, i32),
) -> Result<Vec<Vec<(Mode, f64, f64)>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::new();
    match &spec.law {
        SyntheticLaw::Lacunary { .. } => {
            let m = mother(spec)?;
            let draws: Vec<(f64, f64)> = m
                .iter()
                .map(|_| {
                    (
                        rng.gen_range(0.5..1.0),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            for j in levels.0..=levels.1 {
                let s = 1i64 << j;
                out.push(
                    m.iter()
                        .zip(&draws)
                        .map(|(&(a, b), &(amp, ph))| ((a * s, b * s), amp, ph))
                        .collect(),
                );
            }
        }
        SyntheticLaw::Shell => {
            let h = grid.n() as i64 / 2;
            for j in levels.0..=levels.1 {
                let (lo, hi) = (1i64 << (2 * j), 1i64 << (2 * j + 2));
                let mut level = Vec::new();
                for b in 0..h {
                    for a in -h + 1..h {
                        if b == 0 && a <= 0 {
                            continue;
                        }
                        let r2 = a * a + b * b;
                        if r2 >= lo && r2 < hi {
                            level.push(((a, b), 1.0, rng.gen_range(0.0..std::f64::consts::TAU)));
                        }
                    }
                }
                out.push(level);
            }
        }
    }
    Ok(out)
}

fn assemble<T: Scalar>(
    grid: Grid,
    table: &[Vec<(Mode, f64, f64)>],
    level_amp: &[f64],
) -> SpectralField<T> {
    let mut modes = Vec::new();
    for (level, &a) in table.iter().zip(level_amp) {
        for &((k1, k2), amp, ph) in level {
            let c = 0.5 * a * amp;
            modes.push((
                k1,
                k2,
                Complex::new(T::lit(c * ph.cos()), T::lit(c * ph.sin())),
            ));
        }
    }
    SpectralField::from_modes(grid, &modes)
}

/// Result of [`synthesize_besov_field`].
#[derive(Debug, Clone)]
pub struct SyntheticField<T> {
    pub field: PhysicalField<T>,
    pub spectrum: SpectralField<T>,
    /// (j, 2^{jα}‖Δ̇_jθ‖_{L^q}) over the calibrated shells.
    pub profile: Vec<(i32, f64)>,
    /// Fixed-point sweeps that changed the amplitudes.
    pub sweeps: usize,
}

/// Generates a field with a flat weighted shell profile. Level amplitudes
/// start at 2^{−jα} and are rescaled by the measured profile until every
/// calibrated shell is within 10% of the geometric mean.
///
/// Levels beyond the grid's diagnostic shells are generated but not measured.
pub fn synthesize_besov_field<T: Scalar>(
    spec: &SyntheticSpec,
    grid: Grid,
) -> Result<SyntheticField<T>> {
    if !(spec.norm_exponent >= 1.0) {
        return Err(Error::OutOfRange {
            name: "norm_exponent",
            value: spec.norm_exponent,
            range: "[1, inf]",
        });
    }
    let partition = DyadicPartition::<T>::new(grid)?;
    let levels = spec.level_range(grid)?;
    let shells = spec.calibrated_shells(grid)?;
    let table = mode_table(spec, grid, levels)?;
    let mut amp: Vec<f64> = (levels.0..=levels.1)
        .map(|j| (-(j as f64) * spec.alpha).exp2())
        .collect();
    let q = T::lit(spec.norm_exponent);
    let mut sweeps = 0;
    loop {
        let spectrum = assemble::<T>(grid, &table, &amp);
        let norms = shell_norms(&spectrum, q, &partition)?;
        let profile: Vec<(i32, f64)> = norms
            .into_iter()
            .filter(|(j, _)| *j >= shells.0 && *j <= shells.1)
            .map(|(j, v)| (j, (j as f64 * spec.alpha).exp2() * v.as_f64()))
            .collect();
        let logs: Vec<f64> = profile.iter().map(|(_, w)| w.ln()).collect();
        let center = (logs.iter().sum::<f64>() / logs.len().max(1) as f64).exp();
        let spread = profile
            .iter()
            .map(|(_, w)| (w / center - 1.0).abs())
            .fold(0.0f64, f64::max);
        if spread <= CALIBRATION_TOLERANCE && profile.iter().all(|(_, w)| *w > 0.0) {
            let field = to_physical(&spectrum);
            return Ok(SyntheticField {
                field,
                spectrum,
                profile,
                sweeps,
            });
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Calibration {
                sweeps,
                profile: profile.iter().map(|p| p.1).collect(),
            });
        }
        // damped update: neighbouring levels leak into each shell
        for (j, w) in &profile {
            let i = (j - levels.0) as usize;
            if *w > 0.0 {
                amp[i] *= (center / w).sqrt();
            }
        }
        sweeps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mother_of_unit_annulus() {
        let spec = SyntheticSpec::new(0.5, 3.0, 1).with_law(SyntheticLaw::Lacunary {
            mother_min: 1.0,
            mother_max: 2.0,
        });
        assert_eq!(
            mother(&spec).unwrap(),
            vec![(1, 0), (-1, 1), (0, 1), (1, 1)]
        );
    }

    #[test]
    fn default_levels_fit_band() {
        let spec = SyntheticSpec::new(0.5, 3.0, 1);
        assert_eq!(spec.level_range(Grid::new(512).unwrap()).unwrap(), (0, 6));
        let unit = spec.clone().with_law(SyntheticLaw::Lacunary {
            mother_min: 1.0,
            mother_max: 2.0,
        });
        assert_eq!(unit.level_range(Grid::new(512).unwrap()).unwrap(), (0, 7));
        assert!(spec
            .with_levels(0, 9)
            .level_range(Grid::new(512).unwrap())
            .is_err());
    }
}
