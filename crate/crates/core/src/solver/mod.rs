//! Pseudospectral RK4 integration of the transport equation.

mod checkpoint;
mod initial;
mod rhs;
mod run;
mod state;
mod stepper;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC,
};
pub use initial::InitialCondition;
pub use rhs::{nonlinear_term, NonlinearForm};
pub use run::{run, RunOutcome};
pub use state::SolverState;
pub use stepper::{
    exponential_filter, stable_dt, step_rk4, step_rk4_dt, DtMode, StepPolicy, DEFAULT_CFL,
};
