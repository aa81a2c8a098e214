use serde::{Deserialize, Serialize};

use super::rhs::{rhs, NonlinearForm};
use super::state::SolverState;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SpectralField;

pub const DEFAULT_CFL: f64 = 0.4;

/// How the step size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtMode {
    /// dt = cfl·Δx / max|v|.
    Cfl,
    Fixed(f64),
}

/// Time-step policy for the RK4 integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    pub dt: DtMode,
    pub cfl_number: f64,
    /// Apply exp(−36(|k|/k_c)^36), k_c = n/3, after each step.
    pub filter: bool,
    /// Reject fixed steps that violate the CFL bound.
    pub strict_cfl: bool,
    pub form: NonlinearForm,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            dt: DtMode::Cfl,
            cfl_number: DEFAULT_CFL,
            filter: false,
            strict_cfl: false,
            form: NonlinearForm::Divergence,
        }
    }
}

impl StepPolicy {
    pub fn fixed(dt: f64) -> Self {
        Self {
            dt: DtMode::Fixed(dt),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_number > 0.0 && self.cfl_number < 1.0) {
            return Err(Error::OutOfRange {
                name: "cfl_number",
                value: self.cfl_number,
                range: "(0, 1)",
            });
        }
        if let DtMode::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::OutOfRange {
                    name: "dt",
                    value: dt,
                    range: "(0, inf)",
                });
            }
        }
        Ok(())
    }
}

/// Step size allowed by the policy at the current state. A zero velocity
/// field falls back to cfl·Δx.
pub fn stable_dt<T: Scalar>(state: &SolverState<T>, policy: &StepPolicy) -> Result<f64> {
    policy.validate()?;
    let dx = state.theta.grid().spacing::<f64>();
    let vmax = state.max_velocity()?.as_f64();
    let limit = if vmax > 0.0 {
        policy.cfl_number * dx / vmax
    } else {
        policy.cfl_number * dx
    };
    match policy.dt {
        DtMode::Cfl => Ok(limit),
        DtMode::Fixed(dt) => {
            if policy.strict_cfl && dt > limit {
                return Err(Error::Cfl {
                    dt,
                    limit,
                    max_velocity: vmax,
                });
            }
            Ok(dt)
        }
    }
}

/// One RK4 step with the policy's step size.
pub fn step_rk4<T: Scalar>(state: &SolverState<T>, policy: &StepPolicy) -> Result<SolverState<T>> {
    let dt = stable_dt(state, policy)?;
    step_rk4_dt(state, dt, policy)
}

/// One RK4 step of exactly `dt`.
pub fn step_rk4_dt<T: Scalar>(
    state: &SolverState<T>,
    dt: f64,
    policy: &StepPolicy,
) -> Result<SolverState<T>> {
    let h = T::lit(dt);
    let half = h * T::lit(0.5);
    let (g, form) = (state.gamma, policy.form);
    let th = &state.theta;
    let axpy = |a: &SpectralField<T>, s: T, b: &SpectralField<T>| a.zip_with(b, |x, y| x + y * s);
    let k1 = rhs(th, g, form)?;
    let k2 = rhs(&axpy(th, half, &k1)?, g, form)?;
    let k3 = rhs(&axpy(th, half, &k2)?, g, form)?;
    let k4 = rhs(&axpy(th, h, &k3)?, g, form)?;
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let incr = k1
        .zip_with(&k2, |a, b| a + b * two)?
        .zip_with(&k3, |a, b| a + b * two)?
        .add(&k4)?;
    let mut theta = axpy(th, sixth, &incr)?;
    if policy.filter {
        theta = exponential_filter(&theta);
    }
    Ok(SolverState {
        theta,
        time: state.time + dt,
        step_count: state.step_count + 1,
        gamma: state.gamma,
    })
}

/// exp(−36(|k|/k_c)^36) with k_c = n/3.
pub fn exponential_filter<T: Scalar>(f: &SpectralField<T>) -> SpectralField<T> {
    let g = f.grid();
    let kc = g.dealias_cutoff();
    f.multiply_by(|idx| {
        let r = (g.k_squared(idx) as f64).sqrt() / kc;
        T::lit((-36.0 * r.powi(36)).exp())
    })
}
