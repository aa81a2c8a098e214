//! The smooth radial step ρ: 1 on [0, 3/4], 0 on [1, ∞), with a C^∞
//! transition built from the integrated bump exp(−1/(1−s²)).

use std::sync::OnceLock;

pub(crate) const INNER: f64 = 0.75;
pub(crate) const OUTER: f64 = 1.0;

const PANELS: usize = 8;
const ORDER: usize = 16;

fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// The bump on [0, 1], vanishing to all orders at both ends.
fn bump(s: f64) -> f64 {
    let u = 4.0 * s * (1.0 - s);
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

fn integral(a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let h = (b - a) / PANELS as f64;
    let mut acc = 0.0;
    for p in 0..PANELS {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * bump(mid + 0.5 * h * xi);
        }
        acc += 0.5 * h * s;
    }
    acc
}

fn total() -> f64 {
    static TOTAL: OnceLock<f64> = OnceLock::new();
    *TOTAL.get_or_init(|| 2.0 * integral(0.0, 0.5))
}

/// Normalized cumulative bump, B(0) = 0, B(1) = 1, B(1−t) = 1 − B(t).
pub(crate) fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else if t > 0.5 {
        1.0 - smooth_step(1.0 - t)
    } else {
        integral(0.0, t) / total()
    }
}

/// ρ(r).
pub fn rho(r: f64) -> f64 {
    if r <= INNER {
        1.0
    } else if r >= OUTER {
        0.0
    } else {
        1.0 - smooth_step((r - INNER) / (OUTER - INNER))
    }
}

/// φ(r) = ρ(r/2) − ρ(r).
pub fn phi(r: f64) -> f64 {
    rho(0.5 * r) - rho(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_monotone_and_symmetric() {
        let mut prev = 0.0;
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            let b = smooth_step(t);
            assert!(b >= prev - 1e-15);
            assert!((b + smooth_step(1.0 - t) - 1.0).abs() < 1e-14);
            prev = b;
        }
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_fine_simpson() {
        let t = 0.3;
        let m = 20_000;
        let h = t / m as f64;
        let mut s = bump(0.0) + bump(t);
        for i in 1..m {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * bump(i as f64 * h);
        }
        let simpson = s * h / 3.0;
        assert!((integral(0.0, t) - simpson).abs() < 1e-13);
    }

    #[test]
    fn phi_plateau_and_support() {
        assert_eq!(phi(1.0), 1.0);
        assert_eq!(phi(1.5), 1.0);
        assert_eq!(phi(0.75), 0.0);
        assert_eq!(phi(2.0), 0.0);
        assert!(phi(0.9) > 0.0 && phi(0.9) < 1.0);
    }
}
