use serde::{Deserialize, Serialize};

use super::state::SolverState;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::spectral::{
    dealias, forward, gradient, partial_derivative, riesz_perp_velocity, to_physical, Axis,
    SpectralField,
};

/// Form of the transport term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearForm {
    /// −dealias(∂₁F(v₁θ) + ∂₂F(v₂θ)).
    #[default]
    Divergence,
    /// −dealias(F(v·∇θ)).
    Advective,
}

/// Right-hand side of θ_t = −v·∇θ with products formed on the grid.
pub fn nonlinear_term<T: Scalar>(
    state: &SolverState<T>,
    form: NonlinearForm,
) -> Result<SpectralField<T>> {
    rhs(&state.theta, state.gamma, form)
}

pub(crate) fn rhs<T: Scalar>(
    theta: &SpectralField<T>,
    gamma: T,
    form: NonlinearForm,
) -> Result<SpectralField<T>> {
    let [v1, v2] = riesz_perp_velocity(theta, gamma)?;
    let (v1, v2) = (to_physical(&v1), to_physical(&v2));
    let out = match form {
        NonlinearForm::Divergence => {
            let th = to_physical(theta);
            let f1 = forward(&v1.mul(&th)?);
            let f2 = forward(&v2.mul(&th)?);
            partial_derivative(&f1, Axis::X1).add(&partial_derivative(&f2, Axis::X2))?
        }
        NonlinearForm::Advective => {
            let [d1, d2] = gradient(theta);
            let (d1, d2) = (to_physical(&d1), to_physical(&d2));
            let adv = v1.mul(&d1)?.add(&v2.mul(&d2)?)?;
            forward(&adv)
        }
    };
    Ok(dealias(&out).scale(-T::one()))
}
