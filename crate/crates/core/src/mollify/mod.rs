//! The standard mollifier, commutators and power-law rate fits.

mod fit;
mod kernel;

pub use fit::{fit_rate, least_squares, RateFit};
pub use kernel::{
    bump_mass, cet_commutator, mollified_derivative_norm, mollify, mollify_direct, Mollifier,
    MIN_DIAMETER_CELLS,
};
