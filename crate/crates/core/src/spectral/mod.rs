//! Grid bookkeeping, Fourier transforms and Fourier-multiplier operators.

mod fft;
mod field;
mod grid;
mod ops;
mod quadrature;

pub(crate) use fft::forward;
pub use fft::{to_physical, to_spectral};
pub(crate) use field::check_grid;
pub use field::{PhysicalField, SpectralField};
pub use grid::Grid;
pub(crate) use ops::check_gamma;
pub use ops::{
    dealias, dealiased_product, dealiased_product_physical, divergence, fractional_laplacian,
    gradient, partial_derivative, riesz_perp_velocity, Axis, ZeroModePolicy,
};
pub(crate) use quadrature::lp_norm_values;
pub use quadrature::{inner, integrate, lp_norm, spectral_inner};
