use crate::error::Result;
use crate::reduce;
use crate::scalar::Scalar;
use crate::spectral::{
    check_gamma, riesz_perp_velocity, to_physical, PhysicalField, SpectralField,
};

/// Solution snapshot of θ_t + v·∇θ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<T> {
    pub theta: SpectralField<T>,
    pub time: f64,
    pub step_count: u64,
    pub gamma: T,
}

impl<T: Scalar> SolverState<T> {
    pub fn new(theta: SpectralField<T>, gamma: T) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            theta,
            time: 0.0,
            step_count: 0,
            gamma,
        })
    }

    pub fn physical(&self) -> PhysicalField<T> {
        to_physical(&self.theta)
    }

    /// max_x |v(x)|.
    pub fn max_velocity(&self) -> Result<T> {
        let [v1, v2] = riesz_perp_velocity(&self.theta, self.gamma)?;
        let (a, b) = (to_physical(&v1), to_physical(&v2));
        let (a, b) = (a.values(), b.values());
        Ok(reduce::max_by(a.len(), |i| a[i].hypot(b[i])))
    }

    pub fn is_finite(&self) -> bool {
        self.theta
            .coeffs()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
