//! Pseudospectral testbed for the generalized surface quasi-geostrophic
//! equation θ_t + v·∇θ = 0, v = R⊥Λ^{γ−1}θ, on the torus [0, 2π)².
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar for common use.

// range checks are written `!(x >= lo)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod io;
pub mod lp;
pub mod mollify;
pub mod reduce;
pub mod scalar;
pub mod solver;
pub mod spectral;

pub use error::{Error, ErrorClass, Result};
pub use lp::DyadicPartition;
pub use scalar::Scalar;
pub use spectral::{Grid, PhysicalField, SpectralField};

pub use rustfft::num_complex::Complex;

pub type PhysicalField64 = PhysicalField<f64>;
pub type PhysicalField32 = PhysicalField<f32>;
pub type SpectralField64 = SpectralField<f64>;
pub type SpectralField32 = SpectralField<f32>;
pub type DyadicPartition64 = DyadicPartition<f64>;
pub type SolverState64 = solver::SolverState<f64>;
pub type SolverState32 = solver::SolverState<f32>;
