use crate::error::Result;
use crate::scalar::Scalar;
use crate::spectral::{
    forward, inner, lp_norm, partial_derivative, to_physical, Axis, PhysicalField,
};

/// (∫|θ|^p)^{1/p}.
pub fn lp_energy<T: Scalar>(theta: &PhysicalField<T>, p: T) -> Result<T> {
    lp_norm(theta, p)
}

/// ∫ θ ∂_iθ by grid quadrature with a spectral derivative.
pub fn helicity<T: Scalar>(theta: &PhysicalField<T>, axis: Axis) -> Result<T> {
    let d = to_physical(&partial_derivative(&forward(theta), axis));
    inner(theta, &d)
}
