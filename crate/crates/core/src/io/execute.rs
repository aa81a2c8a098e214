use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::{Mode, Precision, RunConfig};
use super::series::{DiagnosticSeries, SeriesMetadata};
use crate::diagnostics::{
    exponent_scan, helicity, lp_energy, rate_scan, FLUX_CSV_HEADER, RATE_CSV_HEADER,
};
use crate::error::Result;
use crate::lp::{besov_norm, cn_tail_profile, BlockKind, DyadicPartition};
use crate::scalar::Scalar;
use crate::solver::{self, InitialCondition};
use crate::spectral::Axis;

/// Tail threshold used by the c(ℕ) verdict in analysis reports.
pub const CN_TOLERANCE: f64 = 0.1;

/// Files produced by [`execute`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecReport {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Runs a validated config and writes its outputs under `out_dir`. A
/// numerical abort during `simulate` still writes the partial series with an
/// abort marker before the error is returned.
pub fn execute(config: &RunConfig, out_dir: &Path) -> Result<ExecReport> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    match config.mode {
        Mode::Simulate => simulate(config, out_dir, &mut files)?,
        Mode::FluxScan => flux_scan(config, out_dir, &mut files)?,
        Mode::CommutatorScan => commutator_scan(config, out_dir, &mut files)?,
        Mode::Analyze => match config.precision {
            Precision::F64 => analyze::<f64>(config, out_dir, &mut files)?,
            Precision::F32 => analyze::<f32>(config, out_dir, &mut files)?,
        },
    }
    Ok(ExecReport {
        out_dir: out_dir.to_path_buf(),
        files,
    })
}

fn write_json(path: PathBuf, value: &serde_json::Value, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json value");
    text.push('\n');
    fs::write(&path, text)?;
    files.push(path);
    Ok(())
}

fn write_series(path: PathBuf, series: &DiagnosticSeries, files: &mut Vec<PathBuf>) -> Result<()> {
    series.write(&path)?;
    files.push(path);
    Ok(())
}

fn partition_hash(config: &RunConfig) -> Result<String> {
    Ok(DyadicPartition::<f64>::new(config.grid()?)?.profile_hash())
}

fn simulate(config: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let ckpt_dir = out.join("checkpoints");
    fs::create_dir_all(&ckpt_dir)?;
    let outcome = solver::run(config, Some(&ckpt_dir))?;
    write_series(out.join("series.csv"), &outcome.series, files)?;
    let s = &outcome.series;
    let last = s.rows.last().map(|r| {
        r.split(',')
            .next()
            .unwrap_or("0")
            .parse::<f64>()
            .unwrap_or(0.0)
    });
    let summary = json!({
        "mode": config.mode,
        "records": s.rows.len(),
        "final_time": last,
        "checkpoints": outcome.checkpoints,
        "abort": s.abort,
    });
    write_json(out.join("summary.json"), &summary, files)?;
    files.extend(outcome.checkpoints);
    match outcome.abort {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

fn flux_scan(config: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let report = exponent_scan(config)?;
    let mut series = DiagnosticSeries::new(
        SeriesMetadata::new(config, partition_hash(config)?),
        FLUX_CSV_HEADER,
    );
    for r in &report.records {
        series.push(r.csv_row());
    }
    write_series(out.join("flux.csv"), &series, files)?;
    write_json(
        out.join("summary.json"),
        &json!({ "mode": config.mode, "cells": report.cells }),
        files,
    )
}

fn commutator_scan(config: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let report = rate_scan(config)?;
    let mut series = DiagnosticSeries::new(
        SeriesMetadata::new(config, partition_hash(config)?),
        RATE_CSV_HEADER,
    );
    for r in &report.rows {
        series.push(r.csv_row());
    }
    write_series(out.join("commutator.csv"), &series, files)?;
    write_json(
        out.join("summary.json"),
        &json!({ "mode": config.mode, "fits": report.fits }),
        files,
    )
}

fn analyze<T: Scalar>(config: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let grid = config.grid()?;
    let partition = DyadicPartition::<T>::new(grid)?;
    let ic = config.ic.as_ref().expect("validated");
    let state = ic.build::<T>(grid, T::lit(config.gamma), config.seed)?;
    let alpha = match (config.scan.alpha.first(), ic) {
        (Some(&a), _) => a,
        (None, InitialCondition::Besov { alpha, .. }) => *alpha,
        _ => 0.0,
    };
    let phys = state.physical();
    let mut series = DiagnosticSeries::new(
        SeriesMetadata::new(config, partition.profile_hash()),
        "p,j,raw_norm,weighted_norm",
    );
    let mut norms = Vec::new();
    for &p in &config.diagnostics.p {
        let pt = T::lit(p);
        let profile = cn_tail_profile(&state.theta, T::lit(alpha), pt, &partition)?;
        for e in &profile.entries {
            series.push(format!("{p},{},{},{}", e.j, e.raw_norm, e.weighted_norm));
        }
        let besov = besov_norm(
            &state.theta,
            T::lit(alpha),
            pt,
            T::infinity(),
            BlockKind::Homogeneous,
            &partition,
        )?;
        norms.push(json!({
            "p": p,
            "lp_norm": lp_energy(&phys, pt)?.as_f64(),
            "besov_inf": besov.as_f64(),
            "cn_tail": profile.satisfies_cn(CN_TOLERANCE),
        }));
    }
    write_series(out.join("profile.csv"), &series, files)?;
    let summary = json!({
        "mode": config.mode,
        "alpha": alpha,
        "mean": state.theta.mean().as_f64(),
        "max_velocity": state.max_velocity()?.as_f64(),
        "helicity": [helicity(&phys, Axis::X1)?.as_f64(), helicity(&phys, Axis::X2)?.as_f64()],
        "norms": norms,
    });
    write_json(out.join("summary.json"), &summary, files)
}
