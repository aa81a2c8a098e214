use super::besov::ShellNormProfile;
use crate::error::{Error, Result};

/// The localized two-sided geometric kernels.
///
/// `K1(α, γ)`: 2^{j(α+1−γ)} for j ≤ 0 and 2^{−(γ−α)j} for j > 0.
/// `K2(α)`: 2^{jα} for j ≤ 0 and 2^{−(1−α)j} for j > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    K1 { alpha: f64, gamma: f64 },
    K2 { alpha: f64 },
}

impl Kernel {
    pub fn k1(alpha: f64, gamma: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha + 1.0 - gamma <= 0.0 {
            return Err(Error::Summability("alpha + 1 - gamma > 0"));
        }
        if gamma - alpha <= 0.0 {
            return Err(Error::Summability("gamma - alpha > 0"));
        }
        Ok(Kernel::K1 { alpha, gamma })
    }

    pub fn k2(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Kernel::K2 { alpha })
    }

    /// (left rate, right rate): K(j) = 2^{a j} for j ≤ 0, 2^{−b j} for j > 0.
    fn rates(&self) -> (f64, f64) {
        match *self {
            Kernel::K1 { alpha, gamma } => (alpha + 1.0 - gamma, gamma - alpha),
            Kernel::K2 { alpha } => (alpha, 1.0 - alpha),
        }
    }

    pub fn eval(&self, j: i64) -> f64 {
        let (a, b) = self.rates();
        if j <= 0 {
            (a * j as f64).exp2()
        } else {
            (-b * j as f64).exp2()
        }
    }

    /// Σ_{j∈ℤ} K(j) in closed form.
    pub fn l1_norm(&self) -> f64 {
        let (a, b) = self.rates();
        1.0 / (1.0 - (-a).exp2()) + (-b).exp2() / (1.0 - (-b).exp2())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Summability("0 < alpha < 1"));
    }
    Ok(())
}

/// (K ∗ d)(N) = Σ_j K(N − j)·d_j over the weighted entries of `d`.
pub fn kernel_convolve(kernel: &Kernel, d: &ShellNormProfile, n: i32) -> f64 {
    d.entries
        .iter()
        .map(|e| kernel.eval((n - e.j) as i64) * e.weighted_norm)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summability_messages_name_the_inequality() {
        match Kernel::k1(0.3, 1.5) {
            Err(Error::Summability(m)) => assert_eq!(m, "alpha + 1 - gamma > 0"),
            other => panic!("{other:?}"),
        }
        match Kernel::k1(0.5, 0.4) {
            Err(Error::Summability(m)) => assert_eq!(m, "gamma - alpha > 0"),
            other => panic!("{other:?}"),
        }
        assert!(Kernel::k2(1.0).is_err());
    }

    #[test]
    fn value_at_zero_is_one() {
        let k = Kernel::k1(1.0 / 3.0, 1.0).unwrap();
        assert_eq!(k.eval(0), 1.0);
        assert_eq!(Kernel::k2(0.5).unwrap().eval(0), 1.0);
    }
}
