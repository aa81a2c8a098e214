use std::path::{Path, PathBuf};

use super::checkpoint::write_checkpoint;
use super::state::SolverState;
use super::stepper::{stable_dt, step_rk4_dt};
use crate::diagnostics::{energy_flux_lp, helicity, lp_energy};
use crate::error::{Error, Result};
use crate::io::{DiagnosticSeries, Precision, RunConfig, SeriesMetadata};
use crate::lp::DyadicPartition;
use crate::scalar::Scalar;
use crate::spectral::Axis;

/// Result of [`run`]. A numerical failure keeps the rows recorded so far.
#[derive(Debug)]
pub struct RunOutcome {
    pub series: DiagnosticSeries,
    pub checkpoints: Vec<PathBuf>,
    pub abort: Option<Error>,
}

/// Integrates `config.ic` to the horizon, recording diagnostics at t = 0,
/// every `diagnostics.interval` and at the horizon. Steps are shortened to
/// land exactly on diagnostic and checkpoint times. Checkpoints go to
/// `checkpoint_dir` when given, including `final.bin` at the horizon.
pub fn run(config: &RunConfig, checkpoint_dir: Option<&Path>) -> Result<RunOutcome> {
    match config.precision {
        Precision::F64 => run_in::<f64>(config, checkpoint_dir),
        Precision::F32 => run_in::<f32>(config, checkpoint_dir),
    }
}

fn header(config: &RunConfig) -> String {
    let mut cols = vec!["time".to_string(), "step".into(), "mean".into()];
    cols.extend(config.diagnostics.p.iter().map(|p| format!("norm_l{p}")));
    cols.extend([
        "helicity_1".into(),
        "helicity_2".into(),
        "max_velocity".into(),
    ]);
    cols.extend(
        config
            .diagnostics
            .flux_levels
            .iter()
            .map(|n| format!("flux_N{n}")),
    );
    cols.join(",")
}

fn record<T: Scalar>(
    state: &SolverState<T>,
    config: &RunConfig,
    partition: &DyadicPartition<T>,
) -> Result<String> {
    let phys = state.physical();
    let mut cols = vec![
        state.time.to_string(),
        state.step_count.to_string(),
        state.theta.mean().as_f64().to_string(),
    ];
    for &p in &config.diagnostics.p {
        cols.push(lp_energy(&phys, T::lit(p))?.as_f64().to_string());
    }
    for axis in Axis::both() {
        cols.push(helicity(&phys, axis)?.as_f64().to_string());
    }
    cols.push(state.max_velocity()?.as_f64().to_string());
    for &n in &config.diagnostics.flux_levels {
        let r = energy_flux_lp(&state.theta, n, T::lit(2.0), state.gamma, partition, None)?;
        cols.push(r.total.to_string());
    }
    Ok(cols.join(","))
}

/// Next multiple of `interval` strictly after `t`.
fn next_event(t: f64, interval: Option<f64>) -> f64 {
    match interval {
        Some(dt) => {
            let mut k = (t / dt).floor() + 1.0;
            if k * dt <= t * (1.0 + 1e-14) {
                k += 1.0;
            }
            k * dt
        }
        None => f64::INFINITY,
    }
}

fn run_in<T: Scalar>(config: &RunConfig, checkpoint_dir: Option<&Path>) -> Result<RunOutcome> {
    let grid = config.grid()?;
    let partition = DyadicPartition::<T>::new(grid)?;
    let ic = config
        .ic
        .as_ref()
        .ok_or_else(|| Error::config("ic", "required in simulate mode"))?;
    let mut state = ic.build::<T>(grid, T::lit(config.gamma), config.seed)?;
    state.gamma = T::lit(config.gamma);
    let policy = config.step_policy();
    let horizon = config.horizon;

    let meta = SeriesMetadata::new(config, partition.profile_hash());
    let mut series = DiagnosticSeries::new(meta, header(config));
    let mut checkpoints = Vec::new();
    series.push(record(&state, config, &partition)?);

    let mut next_diag = next_event(state.time, config.diagnostics.interval);
    let mut next_ckpt = next_event(state.time, config.checkpoint_interval);
    while state.time < horizon {
        let target = horizon.min(next_diag).min(next_ckpt);
        let mut dt = stable_dt(&state, &policy)?;
        let land = state.time + dt >= target - 1e-12 * target.abs().max(1.0);
        if land {
            dt = target - state.time;
        }
        let mut next = step_rk4_dt(&state, dt, &policy)?;
        if land {
            next.time = target;
        }
        if !next.is_finite() {
            let err = Error::Blowup {
                time: next.time,
                checkpoint: checkpoints.last().cloned(),
            };
            series.abort = Some(err.to_string());
            return Ok(RunOutcome {
                series,
                checkpoints,
                abort: Some(err),
            });
        }
        state = next;
        let at_horizon = state.time >= horizon;
        if state.time >= next_diag || at_horizon {
            series.push(record(&state, config, &partition)?);
            next_diag = next_event(state.time, config.diagnostics.interval);
        }
        if state.time >= next_ckpt {
            if let Some(dir) = checkpoint_dir {
                let path = dir.join(format!("ckpt_{:08}.bin", state.step_count));
                write_checkpoint(&path, &state)?;
                checkpoints.push(path);
            }
            next_ckpt = next_event(state.time, config.checkpoint_interval);
        }
    }
    if let Some(dir) = checkpoint_dir {
        let path = dir.join("final.bin");
        write_checkpoint(&path, &state)?;
        checkpoints.push(path);
    }
    Ok(RunOutcome {
        series,
        checkpoints,
        abort: None,
    })
}
