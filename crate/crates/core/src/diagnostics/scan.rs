use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::flux::{energy_flux_lp, energy_flux_terms, helicity_flux_terms, CoarseGraining};
use super::record::FluxRecord;
use super::synthetic::{synthesize_besov_field, SyntheticSpec};
use crate::error::Result;
use crate::io::{FluxQuantity, Precision, RunConfig, ScanScale};
use crate::lp::{DyadicPartition, Kernel};
use crate::mollify::{fit_rate, least_squares, Mollifier};
use crate::scalar::Scalar;
use crate::spectral::{lp_norm, Axis, PhysicalField, SpectralField};

/// Seed offset of the second factor in commutator scans with α ≠ β.
pub const PARTNER_SEED_OFFSET: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Fitted decay matches the prediction: decay iff α > γ/3.
    Agree,
    Disagree,
    /// Every flux in the cell vanished.
    Trivial,
    /// No prediction or no usable fit.
    Undetermined,
}

/// Fit and verdict for one (γ, α, p) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub gamma: f64,
    pub alpha: Option<f64>,
    pub p: f64,
    pub quantity: FluxQuantity,
    pub scale: ScanScale,
    /// γ − 3α against N, or 3α − γ against log₂ε.
    pub predicted_slope: Option<f64>,
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    /// Scale values entering the fit.
    pub window: Vec<f64>,
    pub decays: Option<bool>,
    pub verdict: Verdict,
    /// max |Π_N| / bound over the scanned shells, when the bound applies.
    pub bound_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub records: Vec<FluxRecord>,
    pub cells: Vec<CellSummary>,
}

/// Indices kept by the default fit window: the middle of the range, two
/// points trimmed from each end when there are at least seven, one when
/// there are at least five.
pub fn middle_window(len: usize) -> std::ops::Range<usize> {
    let trim = match len {
        0..=4 => 0,
        5 | 6 => 1,
        _ => 2,
    };
    trim..len - trim
}

fn window_indices(scales: &[f64], fit: Option<[f64; 2]>) -> Vec<usize> {
    match fit {
        Some([lo, hi]) => {
            let tol = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
            (0..scales.len())
                .filter(|&i| scales[i] >= lo - tol && scales[i] <= hi + tol)
                .collect()
        }
        None => middle_window(scales.len()).collect(),
    }
}

/// Sweeps flux functionals over the (γ, α, p) grid of `config.scan`, each
/// cell on its own synthetic field (or on `config.ic` when given), and fits
/// the scale dependence.
pub fn exponent_scan(config: &RunConfig) -> Result<ScanReport> {
    match config.precision {
        Precision::F64 => exponent_scan_in::<f64>(config),
        Precision::F32 => exponent_scan_in::<f32>(config),
    }
}

struct Cell {
    gamma: f64,
    alpha: Option<f64>,
    p: f64,
    field: usize,
}

fn exponent_scan_in<T: Scalar>(config: &RunConfig) -> Result<ScanReport> {
    let grid = config.grid()?;
    let partition = DyadicPartition::<T>::new(grid)?;
    let scan = &config.scan;
    let alphas: Vec<Option<f64>> = if scan.alpha.is_empty() {
        vec![None]
    } else {
        scan.alpha.iter().copied().map(Some).collect()
    };

    // one field per (α, p); fields do not depend on γ
    let mut keys = Vec::new();
    for a in &alphas {
        for &p in &scan.p {
            keys.push((*a, p));
        }
    }
    let fields: Vec<SpectralField<T>> = keys
        .par_iter()
        .map(|&(a, p)| match (&config.ic, a) {
            (Some(ic), _) => Ok(ic
                .build::<T>(grid, T::lit(config.gamma), config.seed)?
                .theta),
            (None, Some(a)) => {
                let q = scan.norm_exponent.unwrap_or(p + 1.0);
                let spec =
                    SyntheticSpec::new(a, q, config.seed.unwrap_or(0)).with_law(scan.law.clone());
                Ok(synthesize_besov_field::<T>(&spec, grid)?.spectrum)
            }
            (None, None) => unreachable!("validated: alpha list or ic"),
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for gamma in config.scan_gammas() {
        for (field, &(alpha, p)) in keys.iter().enumerate() {
            cells.push(Cell {
                gamma,
                alpha,
                p,
                field,
            });
        }
    }

    let scales: Vec<f64> = match scan.scale {
        ScanScale::Shell if scan.levels.is_empty() => {
            partition.diagnostic_shells().map(f64::from).collect()
        }
        ScanScale::Shell => scan.levels.iter().map(|&l| l as f64).collect(),
        ScanScale::Mollifier => config.scan_eps()?,
    };
    let mollifiers: Vec<Mollifier<T>> = match scan.scale {
        ScanScale::Shell => Vec::new(),
        ScanScale::Mollifier => scales
            .iter()
            .map(|&e| Mollifier::new(grid, T::lit(e)))
            .collect::<Result<_>>()?,
    };

    let results: Vec<(Vec<FluxRecord>, CellSummary)> = cells
        .par_iter()
        .map(|cell| {
            run_cell(
                config,
                cell,
                &fields[cell.field],
                &partition,
                &scales,
                &mollifiers,
            )
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (r, s) in results {
        records.extend(r);
        summaries.push(s);
    }
    Ok(ScanReport {
        records,
        cells: summaries,
    })
}

fn run_cell<T: Scalar>(
    config: &RunConfig,
    cell: &Cell,
    theta: &SpectralField<T>,
    partition: &DyadicPartition<T>,
    scales: &[f64],
    mollifiers: &[Mollifier<T>],
) -> Result<(Vec<FluxRecord>, CellSummary)> {
    let scan = &config.scan;
    let (gamma, p) = (T::lit(cell.gamma), T::lit(cell.p));
    let bound_alpha = cell
        .alpha
        .filter(|&a| Kernel::k1(a, cell.gamma).is_ok() && scan.quantity == FluxQuantity::Energy);
    let mut records = Vec::with_capacity(scales.len());
    for (i, &s) in scales.iter().enumerate() {
        let cg = match scan.scale {
            ScanScale::Shell => CoarseGraining::LowPass {
                n: s as i32,
                partition,
            },
            ScanScale::Mollifier => CoarseGraining::Mollify(&mollifiers[i]),
        };
        let mut rec = match (scan.quantity, scan.scale) {
            (FluxQuantity::Energy, ScanScale::Shell) => energy_flux_lp(
                theta,
                s as i32,
                p,
                gamma,
                partition,
                bound_alpha.map(T::lit),
            )?,
            (FluxQuantity::Energy, ScanScale::Mollifier) => {
                let [a, b] = energy_flux_terms(theta, cg, p, gamma)?;
                let (a, b) = (a.as_f64(), b.as_f64());
                FluxRecord {
                    time: 0.0,
                    scale: s,
                    p: cell.p,
                    gamma: cell.gamma,
                    alpha: None,
                    terms: [Some(a), Some(b), None],
                    total: a + b,
                    bound: None,
                }
            }
            (FluxQuantity::Helicity, _) => helicity_flux_terms(theta, cg, Axis::X1, gamma)?,
        };
        rec.alpha = cell.alpha;
        rec.scale = s;
        records.push(rec);
    }

    let predicted = cell.alpha.map(|a| match scan.scale {
        ScanScale::Shell => cell.gamma - 3.0 * a,
        ScanScale::Mollifier => 3.0 * a - cell.gamma,
    });
    let idx = window_indices(scales, scan.fit);
    let usable: Vec<usize> = idx
        .iter()
        .copied()
        .filter(|&i| records[i].total != 0.0)
        .collect();
    let (slope, r2) = if usable.len() >= 2 && usable.len() == idx.len() {
        let x: Vec<f64> = usable
            .iter()
            .map(|&i| match scan.scale {
                ScanScale::Shell => scales[i],
                ScanScale::Mollifier => scales[i].log2(),
            })
            .collect();
        let y: Vec<f64> = usable
            .iter()
            .map(|&i| records[i].total.abs().log2())
            .collect();
        let (s, r) = least_squares(&x, &y);
        (Some(s), Some(r))
    } else {
        (None, None)
    };
    let trivial = records.iter().all(|r| r.total == 0.0);
    let decays = slope.map(|s| {
        let rate = match scan.scale {
            ScanScale::Shell => -s,
            ScanScale::Mollifier => s,
        };
        rate > scan.flat_tolerance
    });
    let verdict = if trivial {
        Verdict::Trivial
    } else {
        match (decays, cell.alpha) {
            (Some(d), Some(a)) => {
                let expected = a > cell.gamma / 3.0 + 1e-12;
                if d == expected {
                    Verdict::Agree
                } else {
                    Verdict::Disagree
                }
            }
            _ => Verdict::Undetermined,
        }
    };
    let bound_constant = records
        .iter()
        .filter_map(|r| r.bound.filter(|b| *b > 0.0).map(|b| r.total.abs() / b))
        .reduce(f64::max);
    let summary = CellSummary {
        gamma: cell.gamma,
        alpha: cell.alpha,
        p: cell.p,
        quantity: scan.quantity,
        scale: scan.scale,
        predicted_slope: predicted,
        slope,
        r2,
        window: idx.iter().map(|&i| scales[i]).collect(),
        decays,
        verdict,
        bound_constant,
    };
    Ok((records, summary))
}

/// Quantity measured by a commutator scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    /// ‖(fg)^ε − f^εg^ε‖, expected ε^{α+β}.
    Commutator,
    /// ‖f^ε − f‖, expected ε^α.
    MollificationError,
    /// ‖∇f^ε‖, expected ε^{α−1}.
    MollifiedGradient,
}

impl RateKind {
    pub fn name(self) -> &'static str {
        match self {
            RateKind::Commutator => "commutator",
            RateKind::MollificationError => "mollification_error",
            RateKind::MollifiedGradient => "mollified_gradient",
        }
    }
}

pub const RATE_CSV_HEADER: &str = "kind,alpha,beta,eps,q,value";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub kind: RateKind,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub eps: f64,
    pub q: f64,
    pub value: f64,
}

impl RateRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.kind.name(),
            self.alpha,
            self.beta.map(|b| b.to_string()).unwrap_or_default(),
            self.eps,
            self.q,
            self.value
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub kind: RateKind,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub predicted_slope: f64,
    pub slope: f64,
    pub r2: f64,
    pub window: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateScanReport {
    pub rows: Vec<RateRow>,
    pub fits: Vec<RateSummary>,
}

/// ε-scans of the commutator and of the two mollification rates on
/// synthetic fields. With α = β the commutator uses the same field twice.
pub fn rate_scan(config: &RunConfig) -> Result<RateScanReport> {
    match config.precision {
        Precision::F64 => rate_scan_in::<f64>(config),
        Precision::F32 => rate_scan_in::<f32>(config),
    }
}

fn rate_scan_in<T: Scalar>(config: &RunConfig) -> Result<RateScanReport> {
    let grid = config.grid()?;
    let scan = &config.scan;
    let pairs: Vec<[f64; 2]> = if scan.pairs.is_empty() {
        scan.alpha.iter().map(|&a| [a, a]).collect()
    } else {
        scan.pairs.clone()
    };
    let eps = config.scan_eps()?;
    let q = scan.q;
    let seed = config.seed.unwrap_or(0);
    let make = |a: f64, seed: u64| -> Result<PhysicalField<T>> {
        let spec =
            SyntheticSpec::new(a, scan.norm_exponent.unwrap_or(q), seed).with_law(scan.law.clone());
        Ok(synthesize_besov_field::<T>(&spec, grid)?.field)
    };
    let mollifiers: Vec<Mollifier<T>> = eps
        .iter()
        .map(|&e| Mollifier::new(grid, T::lit(e)))
        .collect::<Result<_>>()?;
    // rate fits use every scale unless a window is configured
    let idx: Vec<usize> = match scan.fit {
        Some(_) => window_indices(&eps, scan.fit),
        None => (0..eps.len()).collect(),
    };

    let per_pair: Vec<(Vec<RateRow>, Vec<RateSummary>)> = pairs
        .par_iter()
        .map(|&[a, b]| {
            let f = make(a, seed)?;
            let g = if a == b {
                f.clone()
            } else {
                make(b, seed + PARTNER_SEED_OFFSET)?
            };
            let mut rows = Vec::new();
            let mut fits = Vec::new();
            let kinds = [
                (RateKind::Commutator, Some(b), a + b),
                (RateKind::MollificationError, None, a),
                (RateKind::MollifiedGradient, None, a - 1.0),
            ];
            for (kind, beta, predicted) in kinds {
                let values: Vec<f64> = mollifiers
                    .iter()
                    .map(|m| -> Result<f64> {
                        let v = match kind {
                            RateKind::Commutator => lp_norm(&m.commutator(&f, &g)?, T::lit(q))?,
                            RateKind::MollificationError => {
                                lp_norm(&m.apply(&f)?.sub(&f)?, T::lit(q))?
                            }
                            RateKind::MollifiedGradient => m.derivative_norm(&f, 1, T::lit(q))?,
                        };
                        Ok(v.as_f64())
                    })
                    .collect::<Result<_>>()?;
                for (e, v) in eps.iter().zip(&values) {
                    rows.push(RateRow {
                        kind,
                        alpha: a,
                        beta,
                        eps: *e,
                        q,
                        value: *v,
                    });
                }
                let ws: Vec<f64> = idx.iter().map(|&i| eps[i]).collect();
                let wv: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
                let fit = fit_rate(&ws, &wv)?;
                fits.push(RateSummary {
                    kind,
                    alpha: a,
                    beta,
                    predicted_slope: predicted,
                    slope: fit.slope,
                    r2: fit.r2,
                    window: ws,
                });
            }
            Ok((rows, fits))
        })
        .collect::<Result<_>>()?;
    let mut report = RateScanReport {
        rows: Vec::new(),
        fits: Vec::new(),
    };
    for (r, f) in per_pair {
        report.rows.extend(r);
        report.fits.extend(f);
    }
    Ok(report)
}
