use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduce;
use crate::scalar::Scalar;
use crate::spectral::{
    check_grid, forward, gradient, lp_norm, partial_derivative, to_physical, Axis, Grid,
    PhysicalField, SpectralField,
};

/// Smallest kernel diameter, in grid cells, accepted by [`Mollifier::new`].
pub const MIN_DIAMETER_CELLS: f64 = 5.0;

/// ∫_{|x|<1} exp(−1/(1−|x|²)) dx = π ∫₀¹ e^{−1/u} du.
pub fn bump_mass() -> f64 {
    // e^{−1/u} on [0, 1] by composite Simpson; the integrand is flat at 0.
    let m = 20_000;
    let h = 1.0 / m as f64;
    let f = |u: f64| if u <= 0.0 { 0.0 } else { (-1.0 / u).exp() };
    let mut s = f(0.0) + f(1.0);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    std::f64::consts::PI * s * h / 3.0
}

/// The standard mollifier at scale ε, periodized onto a grid.
///
/// The kernel η_ε(x) = ε^{−2}C₀exp(−1/(1−|x/ε|²)) is sampled at the grid
/// nodes (distance measured on the torus) and C₀ is fixed so the grid
/// quadrature of the samples is exactly 1.
#[derive(Debug, Clone)]
pub struct Mollifier<T> {
    grid: Grid,
    eps: T,
    kernel: PhysicalField<T>,
    multiplier: Vec<T>,
    normalization: T,
}

impl<T: Scalar> Mollifier<T> {
    pub fn new(grid: Grid, eps: T) -> Result<Self> {
        let quarter = grid.period::<T>() * T::lit(0.25);
        if !(eps > T::zero() && eps < quarter) {
            return Err(Error::OutOfRange {
                name: "eps",
                value: eps.as_f64(),
                range: "(0, pi/2)",
            });
        }
        let cells = (T::lit(2.0) * eps / grid.spacing::<T>()).as_f64();
        if cells < MIN_DIAMETER_CELLS {
            return Err(Error::UnderResolved {
                eps: eps.as_f64(),
                cells,
            });
        }
        let period = grid.period::<T>();
        let raw = PhysicalField::from_fn(grid, |x1: T, x2: T| {
            let d1 = x1.min(period - x1);
            let d2 = x2.min(period - x2);
            let r2 = (d1 * d1 + d2 * d2) / (eps * eps);
            if r2 < T::one() {
                (-(T::one() - r2).recip()).exp()
            } else {
                T::zero()
            }
        });
        let mass = reduce::pairwise_sum(raw.values()) * grid.cell_area::<T>();
        let normalization = mass.recip();
        let kernel = raw.scale(normalization);
        let area = period * period;
        let multiplier = forward(&kernel)
            .coeffs()
            .par_iter()
            .map(|c| c.re * area)
            .collect();
        Ok(Self {
            grid,
            eps,
            kernel,
            multiplier,
            normalization: normalization * eps * eps,
        })
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Tabulated η_ε.
    pub fn kernel(&self) -> &PhysicalField<T> {
        &self.kernel
    }

    /// The constant C₀ in front of the unit-scale bump.
    pub fn normalization(&self) -> T {
        self.normalization
    }

    /// η̂_ε(k), with η̂_ε(0) = 1.
    pub fn symbol(&self, k1: i64, k2: i64) -> T {
        self.multiplier[self.grid.index_of(k1, k2)]
    }

    /// Applies the mollifier to a spectral field.
    pub fn apply_spectral(&self, f: &SpectralField<T>) -> Result<SpectralField<T>> {
        check_grid(self.grid, f.grid())?;
        Ok(f.multiply_by(|idx| self.multiplier[idx]))
    }

    /// f^ε via the spectral multiplier.
    pub fn apply(&self, f: &PhysicalField<T>) -> Result<PhysicalField<T>> {
        check_grid(self.grid, f.grid())?;
        Ok(to_physical(&self.apply_spectral(&forward(f))?))
    }

    /// f^ε by direct periodic summation over the kernel support.
    pub fn apply_direct(&self, f: &PhysicalField<T>) -> Result<PhysicalField<T>> {
        check_grid(self.grid, f.grid())?;
        let n = self.grid.n();
        let area = self.grid.cell_area::<T>();
        let taps: Vec<(usize, usize, T)> = self
            .kernel
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > T::zero())
            .map(|(idx, &w)| (idx / n, idx % n, w * area))
            .collect();
        let v = f.values();
        let mut out = vec![T::zero(); self.grid.len()];
        out.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
            for (c, o) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for &(dr, dc, w) in &taps {
                    acc = acc + w * v[((r + n - dr) % n) * n + (c + n - dc) % n];
                }
                *o = acc;
            }
        });
        PhysicalField::new(self.grid, out)
    }

    /// (fg)^ε − f^ε g^ε.
    pub fn commutator(
        &self,
        f: &PhysicalField<T>,
        g: &PhysicalField<T>,
    ) -> Result<PhysicalField<T>> {
        check_grid(f.grid(), g.grid())?;
        let fg = self.apply(&f.mul(g)?)?;
        let fe = self.apply(f)?;
        let ge = self.apply(g)?;
        fg.zip_with(&fe.mul(&ge)?, |a, b| a - b)
    }

    /// ‖∇^k f^ε‖_{L^p} with k ∈ {1, 2}; the pointwise magnitude is the
    /// Euclidean norm of the gradient (k = 1) or of the Hessian (k = 2).
    pub fn derivative_norm(&self, f: &PhysicalField<T>, k: u32, p: T) -> Result<T> {
        let fe = self.apply_spectral(&forward(f))?;
        let parts: Vec<PhysicalField<T>> = match k {
            1 => gradient(&fe).iter().map(to_physical).collect(),
            2 => {
                let [d1, d2] = gradient(&fe);
                vec![
                    to_physical(&partial_derivative(&d1, Axis::X1)),
                    to_physical(&partial_derivative(&d1, Axis::X2)),
                    to_physical(&partial_derivative(&d1, Axis::X2)),
                    to_physical(&partial_derivative(&d2, Axis::X2)),
                ]
            }
            _ => {
                return Err(Error::OutOfRange {
                    name: "k",
                    value: k as f64,
                    range: "{1, 2}",
                })
            }
        };
        let len = self.grid.len();
        let mag: Vec<T> = (0..len)
            .into_par_iter()
            .map(|i| {
                parts
                    .iter()
                    .map(|f| f.values()[i] * f.values()[i])
                    .fold(T::zero(), |a, b| a + b)
                    .sqrt()
            })
            .collect();
        lp_norm(&PhysicalField::new(self.grid, mag)?, p)
    }
}

/// f^ε (spectral route).
pub fn mollify<T: Scalar>(f: &PhysicalField<T>, eps: T) -> Result<PhysicalField<T>> {
    Mollifier::new(f.grid(), eps)?.apply(f)
}

/// f^ε (direct-sum route).
pub fn mollify_direct<T: Scalar>(f: &PhysicalField<T>, eps: T) -> Result<PhysicalField<T>> {
    Mollifier::new(f.grid(), eps)?.apply_direct(f)
}

/// (fg)^ε − f^ε g^ε.
pub fn cet_commutator<T: Scalar>(
    f: &PhysicalField<T>,
    g: &PhysicalField<T>,
    eps: T,
) -> Result<PhysicalField<T>> {
    check_grid(f.grid(), g.grid())?;
    Mollifier::new(f.grid(), eps)?.commutator(f, g)
}

/// ‖∇^k f^ε‖_{L^p}.
pub fn mollified_derivative_norm<T: Scalar>(
    f: &PhysicalField<T>,
    eps: T,
    k: u32,
    p: T,
) -> Result<T> {
    Mollifier::new(f.grid(), eps)?.derivative_norm(f, k, p)
}
