use num_traits::Float;
use rayon::prelude::*;

use super::record::FluxRecord;
use crate::error::{Error, Result};
use crate::lp::{cn_tail_profile, kernel_convolve, low_pass, DyadicPartition, Kernel, ShellEntry};
use crate::mollify::Mollifier;
use crate::reduce;
use crate::scalar::Scalar;
use crate::spectral::{
    dealias, dealiased_product, forward, partial_derivative, riesz_perp_velocity, spectral_inner,
    to_physical, Axis, PhysicalField, SpectralField,
};

/// Coarse-graining used by a flux functional: the Littlewood-Paley cut-off
/// S_N or mollification at scale ε.
#[derive(Debug, Clone, Copy)]
pub enum CoarseGraining<'a, T> {
    LowPass {
        n: i32,
        partition: &'a DyadicPartition<T>,
    },
    Mollify(&'a Mollifier<T>),
}

impl<T: Scalar> CoarseGraining<'_, T> {
    fn apply(&self, f: &SpectralField<T>) -> Result<SpectralField<T>> {
        match self {
            CoarseGraining::LowPass { n, partition } => low_pass(f, *n, partition),
            CoarseGraining::Mollify(m) => m.apply_spectral(f),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            CoarseGraining::LowPass { n, .. } => *n as f64,
            CoarseGraining::Mollify(m) => m.eps().as_f64(),
        }
    }
}

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if !(p >= T::lit(2.0)) || !p.is_finite() {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
            range: "[2, inf)",
        });
    }
    Ok(())
}

/// Per-direction contributions of
/// (p−1)∫[(v_jθ)~ − ṽ_jθ̃]∂_jθ̃|θ̃|^{p−2}.
///
/// θ is first projected onto the dealiased band and every product is
/// dealiased, so the discrete integrals obey the same integration-by-parts
/// identities as the continuous ones.
pub fn energy_flux_terms<T: Scalar>(
    theta: &SpectralField<T>,
    cg: CoarseGraining<'_, T>,
    p: T,
    gamma: T,
) -> Result<[T; 2]> {
    check_p(p)?;
    let th = dealias(theta);
    let v = riesz_perp_velocity(&th, gamma)?;
    let tt = cg.apply(&th)?;
    let tt_phys = to_physical(&tt);
    let theta_phys = to_physical(&th);
    let weight: Option<Vec<T>> = if p == T::lit(2.0) {
        None
    } else {
        let e = p - T::lit(2.0);
        Some(
            tt_phys
                .values()
                .par_iter()
                .map(|&x| Float::abs(x).powf(e))
                .collect(),
        )
    };
    let area = th.grid().cell_area::<T>();
    let mut out = [T::zero(); 2];
    for (j, axis) in Axis::both().into_iter().enumerate() {
        let vj = to_physical(&v[j]);
        let vt = to_physical(&cg.apply(&v[j])?);
        let fine = cg.apply(&dealias(&forward(&vj.mul(&theta_phys)?)))?;
        let coarse = dealias(&forward(&vt.mul(&tt_phys)?));
        let c = to_physical(&fine.sub(&coarse)?);
        let d = to_physical(&partial_derivative(&tt, axis));
        let (cv, dv) = (c.values(), d.values());
        let s = match &weight {
            None => reduce::sum_by(cv.len(), |i| cv[i] * dv[i]),
            Some(w) => reduce::sum_by(cv.len(), |i| cv[i] * dv[i] * w[i]),
        };
        out[j] = (p - T::one()) * s * area;
    }
    Ok(out)
}

/// Littlewood-Paley energy flux Π_N. When `alpha` is given the record also
/// carries the bound 2^{(γ−3α)N}(K₁∗ḋ)(N)(K₂∗ḋ)(N)(K₂∗d)(N) with
/// ḋ_j = 2^{jα}‖Δ̇_jθ‖_{L^{p+1}}.
pub fn energy_flux_lp<T: Scalar>(
    theta: &SpectralField<T>,
    n: i32,
    p: T,
    gamma: T,
    partition: &DyadicPartition<T>,
    alpha: Option<T>,
) -> Result<FluxRecord> {
    if n < partition.jmin() || n > partition.jtop() + 1 {
        return Err(Error::ShellOutOfRange {
            j: n,
            lo: partition.jmin(),
            hi: partition.jtop() + 1,
        });
    }
    let terms = energy_flux_terms(theta, CoarseGraining::LowPass { n, partition }, p, gamma)?;
    let bound = match alpha {
        Some(a) => Some(flux_bound(theta, n, p, gamma, a, partition)?),
        None => None,
    };
    Ok(energy_record(terms, n as f64, p, gamma, alpha, bound))
}

/// Mollified energy flux at scale ε.
pub fn energy_flux_mollified<T: Scalar>(
    theta: &PhysicalField<T>,
    eps: T,
    p: T,
    gamma: T,
) -> Result<FluxRecord> {
    let m = Mollifier::new(theta.grid(), eps)?;
    energy_flux_mollified_with(&forward(theta), &m, p, gamma)
}

/// Mollified energy flux with a prebuilt mollifier.
pub fn energy_flux_mollified_with<T: Scalar>(
    theta: &SpectralField<T>,
    m: &Mollifier<T>,
    p: T,
    gamma: T,
) -> Result<FluxRecord> {
    let terms = energy_flux_terms(theta, CoarseGraining::Mollify(m), p, gamma)?;
    Ok(energy_record(terms, m.eps().as_f64(), p, gamma, None, None))
}

fn energy_record<T: Scalar>(
    terms: [T; 2],
    scale: f64,
    p: T,
    gamma: T,
    alpha: Option<T>,
    bound: Option<f64>,
) -> FluxRecord {
    let (a, b) = (terms[0].as_f64(), terms[1].as_f64());
    FluxRecord {
        time: 0.0,
        scale,
        p: p.as_f64(),
        gamma: gamma.as_f64(),
        alpha: alpha.map(|x| x.as_f64()),
        terms: [Some(a), Some(b), None],
        total: a + b,
        bound,
    }
}

/// Evaluates 2^{(γ−3α)N}(K₁∗ḋ)(N)(K₂∗ḋ)(N)(K₂∗d)(N), the shell norms taken
/// in L^{p+1} over every shell of the grid.
pub fn flux_bound<T: Scalar>(
    theta: &SpectralField<T>,
    n: i32,
    p: T,
    gamma: T,
    alpha: T,
    partition: &DyadicPartition<T>,
) -> Result<f64> {
    let (a, g) = (alpha.as_f64(), gamma.as_f64());
    let k1 = Kernel::k1(a, g)?;
    let k2 = Kernel::k2(a)?;
    let q = p + T::one();
    let th = dealias(theta);
    let mut dot = cn_tail_profile(&th, alpha, q, partition)?;
    // extend to every shell of the grid
    for j in partition.jmax() + 1..=partition.jtop() {
        let b = crate::lp::dyadic_block(&th, j, partition, crate::lp::BlockKind::Homogeneous)?;
        let r = crate::spectral::lp_norm(&to_physical(&b), q)?.as_f64();
        dot.entries.push(ShellEntry {
            j,
            raw_norm: r,
            weighted_norm: (j as f64 * a).exp2() * r,
        });
    }
    let mut nonhom = dot.clone();
    let low = crate::lp::dyadic_block(&th, -1, partition, crate::lp::BlockKind::Nonhomogeneous)?;
    let r = crate::spectral::lp_norm(&to_physical(&low), q)?.as_f64();
    nonhom.entries.insert(
        0,
        ShellEntry {
            j: -1,
            raw_norm: r,
            weighted_norm: (-a).exp2() * r,
        },
    );
    let pre = ((g - 3.0 * a) * n as f64).exp2();
    Ok(pre
        * kernel_convolve(&k1, &dot, n)
        * kernel_convolve(&k2, &dot, n)
        * kernel_convolve(&k2, &nonhom, n))
}

/// The three helicity flux terms for direction i:
/// I = ∫∂_jθ̃[(∂_iv_jθ)~ − ∂_iṽ_jθ̃], II = ∫[(v_j∂_iθ)~ − ṽ_j∂_iθ̃]∂_jθ̃,
/// III = ∫[(v_jθ)~ − θ̃ṽ_j]∂_i∂_jθ̃, summed over j.
pub fn helicity_flux_terms<T: Scalar>(
    theta: &SpectralField<T>,
    cg: CoarseGraining<'_, T>,
    axis: Axis,
    gamma: T,
) -> Result<FluxRecord> {
    let th = dealias(theta);
    let v = riesz_perp_velocity(&th, gamma)?;
    let tt = cg.apply(&th)?;
    let di_theta = partial_derivative(&th, axis);
    let di_tt = partial_derivative(&tt, axis);
    let mut terms = [T::zero(); 3];
    for (j, axis_j) in Axis::both().into_iter().enumerate() {
        let vt = cg.apply(&v[j])?;
        let di_v = partial_derivative(&v[j], axis);
        let di_vt = partial_derivative(&vt, axis);
        let dj_tt = partial_derivative(&tt, axis_j);
        let didj_tt = partial_derivative(&dj_tt, axis);

        let a = cg
            .apply(&dealiased_product(&di_v, &th)?)?
            .sub(&dealiased_product(&di_vt, &tt)?)?;
        let b = cg
            .apply(&dealiased_product(&v[j], &di_theta)?)?
            .sub(&dealiased_product(&vt, &di_tt)?)?;
        let c = cg
            .apply(&dealiased_product(&v[j], &th)?)?
            .sub(&dealiased_product(&tt, &vt)?)?;
        terms[0] = terms[0] + spectral_inner(&dj_tt, &a)?;
        terms[1] = terms[1] + spectral_inner(&b, &dj_tt)?;
        terms[2] = terms[2] + spectral_inner(&c, &didj_tt)?;
    }
    let t: Vec<f64> = terms.iter().map(|x| x.as_f64()).collect();
    Ok(FluxRecord {
        time: 0.0,
        scale: cg.scale(),
        p: 2.0,
        gamma: gamma.as_f64(),
        alpha: None,
        terms: [Some(t[0]), Some(t[1]), Some(t[2])],
        total: t[0] + t[1] + t[2],
        bound: None,
    })
}
