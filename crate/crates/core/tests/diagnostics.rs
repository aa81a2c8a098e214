mod common;

use std::f64::consts::PI;

use common::*;
use gsqg_core::diagnostics::*;
use gsqg_core::io::parse_config_str;
use gsqg_core::lp::{cn_tail_profile, increment_norm, DyadicPartition};
use gsqg_core::mollify::{fit_rate, Mollifier};
use gsqg_core::spectral::*;
use gsqg_core::{Complex, Grid, PhysicalField, SpectralField};
use proptest::prelude::*;

fn band_limited(g: Grid, kmax: i64, seed: u64) -> SpectralField<f64> {
    let full = smooth_spectrum(g, 3.0, seed);
    full.map_modes(|idx, c| {
        let (k1, k2) = g.wavevector(idx);
        if k1.abs() <= kmax && k2.abs() <= kmax {
            c
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

/// Neumaier-compensated Σ|x|^p · dA, then the p-th root.
fn compensated_lp(v: &[f64], p: f64, area: f64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in v {
        let t = x.abs().powf(p);
        let s = sum + t;
        comp += if sum.abs() >= t {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
    }
    ((sum + comp) * area).powf(1.0 / p)
}

#[test]
fn lp_energy_of_constant() {
    let g = Grid::new(32).unwrap();
    for p in [1.0, 2.0, 3.5] {
        let c = PhysicalField::<f64>::constant(g, -1.7);
        let want = 1.7 * (4.0 * PI * PI).powf(1.0 / p);
        assert!(rel(lp_energy(&c, p).unwrap(), want) < 1e-13);
    }
}

#[test]
fn lp_energy_parseval_and_compensated_oracle() {
    let g = Grid::new(64).unwrap();
    let f = noise(g, 17);
    let e2 = lp_energy(&f, 2.0).unwrap();
    let spec = to_spectral(&f).unwrap();
    assert!(rel(e2 * e2, 4.0 * PI * PI * spec.power_sum()) < 1e-12);
    let e3 = lp_energy(&f, 3.0).unwrap();
    assert!(rel(e3, compensated_lp(f.values(), 3.0, g.cell_area())) < 1e-12);
}

#[test]
fn helicity_vanishes() {
    let g = Grid::new(64).unwrap();
    let c = PhysicalField::from_fn(g, |x: f64, _| x.cos());
    assert!(helicity(&c, Axis::X1).unwrap().abs() < 1e-14);
    for seed in 0..5 {
        let f = noise(g, seed);
        let spec = to_spectral(&f).unwrap();
        let grad = gradient_magnitude(&spec);
        for axis in Axis::both() {
            let h = helicity(&f, axis).unwrap();
            assert!(h.abs() < 1e-12 * lp_energy(&f, 2.0).unwrap() * grad, "{h}");
            // Parseval-form oracle
            let d = partial_derivative(&spec, axis);
            let s = spectral_inner(&spec, &d).unwrap();
            assert!((h - s).abs() < 1e-13 * lp_energy(&f, 2.0).unwrap() * grad);
        }
    }
}

fn gradient_magnitude(spec: &SpectralField<f64>) -> f64 {
    let [a, b] = gradient(spec);
    let (a, b) = (to_physical(&a), to_physical(&b));
    (lp_energy(&a, 2.0).unwrap().powi(2) + lp_energy(&b, 2.0).unwrap().powi(2)).sqrt()
}

#[test]
fn flux_of_band_limited_field_vanishes_above_band() {
    let g = Grid::new(64).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    let th = band_limited(g, 3, 5);
    for n in [4, 5, 6] {
        for p in [2.0, 3.0] {
            let r = energy_flux_lp(&th, n, p, 1.0, &part, None).unwrap();
            assert!(r.total.abs() < 1e-12, "N={n} p={p}: {}", r.total);
        }
        let h = helicity_flux_terms(
            &th,
            CoarseGraining::LowPass {
                n,
                partition: &part,
            },
            Axis::X2,
            1.0,
        )
        .unwrap();
        for t in h.terms.iter().flatten() {
            assert!(t.abs() < 1e-12);
        }
    }
    assert!(energy_flux_lp(&th, 7, 2.0, 1.0, &part, None).is_err());
    assert!(energy_flux_lp(&th, -1, 2.0, 1.0, &part, None).is_err());
    assert!(energy_flux_lp(&th, 3, 1.5, 1.0, &part, None).is_err());
}

#[test]
fn flux_parity_in_theta() {
    let g = Grid::new(64).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    let th = smooth_spectrum(g, 8.0, 3);
    let neg = th.scale(-1.0);
    for n in 1..=part.jmax() {
        let a = energy_flux_lp(&th, n, 2.0, 1.0, &part, None).unwrap().total;
        let b = energy_flux_lp(&neg, n, 2.0, 1.0, &part, None)
            .unwrap()
            .total;
        assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-300));
        let a = energy_flux_lp(&th, n, 3.0, 1.0, &part, None).unwrap().total;
        let b = energy_flux_lp(&neg, n, 3.0, 1.0, &part, None)
            .unwrap()
            .total;
        assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-300));
    }
}

#[test]
fn record_terms_sum_to_total() {
    let g = Grid::new(64).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    let th = smooth_spectrum(g, 8.0, 4);
    let r = energy_flux_lp(&th, 3, 2.0, 0.5, &part, Some(0.4)).unwrap();
    assert!(r.decomposition_defect() < 1e-9);
    assert!(r.bound.unwrap() > 0.0);
    assert_eq!(
        r.csv_row().split(',').count(),
        FLUX_CSV_HEADER.split(',').count()
    );
}

#[test]
fn mollified_flux_of_constant_is_zero() {
    let g = Grid::new(64).unwrap();
    let c = PhysicalField::<f64>::constant(g, 2.5);
    for p in [2.0, 3.0] {
        assert_eq!(energy_flux_mollified(&c, 0.5, p, 1.0).unwrap().total, 0.0);
    }
}

#[test]
fn mollified_flux_of_band_limited_field_saturates() {
    // Taylor regime: the rate approaches 2 from below as ε|k| → 0
    let g = Grid::new(1024).unwrap();
    let th = to_physical(&band_limited(g, 4, 6));
    let eps = [0.16, 0.08, 0.04, 0.02];
    let vals: Vec<f64> = eps
        .iter()
        .map(|&e| energy_flux_mollified(&th, e, 2.0, 1.0).unwrap().total.abs())
        .collect();
    let fit = fit_rate(&eps, &vals).unwrap();
    assert!(fit.slope >= 1.95, "slope {}", fit.slope);
}

#[test]
fn helicity_budget_closes() {
    let g = Grid::new(64).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    for seed in 0..6u64 {
        let th = to_spectral(&noise(g, seed)).unwrap();
        let n = 1 + (seed as i32 % part.jtop());
        for axis in Axis::both() {
            let r = helicity_flux_terms(
                &th,
                CoarseGraining::LowPass {
                    n,
                    partition: &part,
                },
                axis,
                0.8,
            )
            .unwrap();
            let big = r.terms.iter().flatten().fold(0.0f64, |m, t| m.max(t.abs()));
            assert!(big > 0.0);
            assert!(r.total.abs() < 1e-9 * big, "{:?}", r.terms);
        }
    }
    let th = smooth_spectrum(g, 6.0, 9);
    let m = Mollifier::new(g, 0.6).unwrap();
    let r = helicity_flux_terms(&th, CoarseGraining::Mollify(&m), Axis::X1, 1.0).unwrap();
    let big = r.terms.iter().flatten().fold(0.0f64, |m, t| m.max(t.abs()));
    assert!(r.total.abs() < 1e-9 * big);
}

#[test]
fn synthetic_field_flat_and_deterministic() {
    let g = Grid::new(256).unwrap();
    let spec = SyntheticSpec::new(1.0, 2.0, 7);
    let a = synthesize_besov_field::<f64>(&spec, g).unwrap();
    let b = synthesize_besov_field::<f64>(&spec, g).unwrap();
    assert_eq!(a.field.values(), b.field.values());
    let logs: Vec<f64> = a.profile.iter().map(|p| p.1.ln()).collect();
    let center = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    assert!(a
        .profile
        .iter()
        .all(|p| (p.1 / center - 1.0).abs() <= CALIBRATION_TOLERANCE));
    assert!(a.sweeps <= MAX_SWEEPS);
    let other = synthesize_besov_field::<f64>(&SyntheticSpec::new(1.0, 2.0, 8), g).unwrap();
    assert_ne!(a.field.values(), other.field.values());

    // increment norm over lattice shifts h = 2^{-m}·2π scales like h^α
    let hs: Vec<f64> = (4..=7).map(|m| 2.0 * PI * (-(m as f64)).exp2()).collect();
    let inc: Vec<f64> = hs
        .iter()
        .map(|&h| increment_norm(&a.field, (h, 0.0), 2.0).unwrap())
        .collect();
    let fit = fit_rate(&hs, &inc).unwrap();
    assert!(
        (fit.slope - 1.0).abs() < 0.2,
        "increment slope {}",
        fit.slope
    );
}

#[test]
fn synthetic_tail_comparison() {
    let g = Grid::new(512).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    let smooth = synthesize_besov_field::<f64>(&SyntheticSpec::new(0.8, 3.0, 2), g).unwrap();
    let rough = synthesize_besov_field::<f64>(&SyntheticSpec::new(0.4, 3.0, 2), g).unwrap();
    let s = 0.6;
    let tail = |f: &SpectralField<f64>| {
        let prof = cn_tail_profile(f, s, 3.0, &part).unwrap();
        let e = &prof.entries;
        e[e.len() - 1].weighted_norm / e[2].weighted_norm
    };
    assert!(tail(&smooth.spectrum) < 0.6);
    assert!(tail(&rough.spectrum) > 1.6);
}

fn scan_config(body: &str) -> gsqg_core::io::RunConfig {
    parse_config_str(&format!(r#"{{"mode":"flux-scan",{body}}}"#)).unwrap()
}

#[test]
fn scan_single_cell_slope() {
    let c = scan_config(
        r#""n":512,"gamma":1.0,"seed":1,"scan":{"alpha":[0.6666666666666666],"norm_exponent":3}"#,
    );
    let rep = exponent_scan(&c).unwrap();
    let cell = &rep.cells[0];
    let slope = cell.slope.unwrap();
    assert!((slope + 1.0).abs() < 0.15, "slope {slope}");
    assert_eq!(cell.verdict, Verdict::Agree);
    assert!(cell.bound_constant.unwrap() <= 100.0);
    assert_eq!(rep.records.len(), 7);
}

#[test]
fn scan_critical_cell_is_flat() {
    let c = scan_config(
        r#""n":512,"gamma":1.0,"seed":1,"scan":{"alpha":[0.3333333333333333],"norm_exponent":3}"#,
    );
    let cell = &exponent_scan(&c).unwrap().cells[0];
    assert!(cell.slope.unwrap().abs() < 0.15, "slope {:?}", cell.slope);
    assert_eq!(cell.verdict, Verdict::Agree);
}

#[test]
fn scan_of_zero_field_is_trivial() {
    let c = scan_config(
        r#""n":64,"gamma":1.0,"ic":{"kind":"zero"},"scan":{"gamma":[0.5,1.0],"p":[2,3]}"#,
    );
    let rep = exponent_scan(&c).unwrap();
    assert_eq!(rep.cells.len(), 4);
    assert!(rep.cells.iter().all(|c| c.verdict == Verdict::Trivial));
    assert!(rep.records.iter().all(|r| r.total == 0.0));
}

#[test]
fn helicity_terms_scale_with_two_extra_derivatives() {
    // θ calibrated at α + 1 in L^{3/2}, i.e. ∇θ at α; each term carries
    // two derivatives more than the energy flux: slope γ − 3α − 2
    let (gamma, alpha) = (1.0, 1.0 / 3.0);
    let c = scan_config(&format!(
        r#""n":512,"gamma":{gamma},"seed":1,"scan":{{"alpha":[{}],"norm_exponent":1.5,"quantity":"helicity"}}"#,
        alpha + 1.0
    ));
    let rep = exponent_scan(&c).unwrap();
    let window = middle_window(rep.records.len());
    for t in 0..3 {
        let x: Vec<f64> = rep.records[window.clone()]
            .iter()
            .map(|r| r.scale)
            .collect();
        let y: Vec<f64> = rep.records[window.clone()]
            .iter()
            .map(|r| r.terms[t].unwrap().abs().log2())
            .collect();
        let (slope, _) = gsqg_core::mollify::least_squares(&x, &y);
        assert!(
            (slope - (gamma - 3.0 * alpha - 2.0)).abs() < 0.2,
            "term {t}: slope {slope}"
        );
    }
}

#[test]
fn middle_window_trims_edges() {
    assert_eq!(middle_window(8), 2..6);
    assert_eq!(middle_window(5), 1..4);
    assert_eq!(middle_window(3), 0..3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn helicity_budget_random(seed in any::<u64>(), n in 0i32..=5, gamma in 0.0f64..=2.0) {
        let g = Grid::new(64).unwrap();
        let part = DyadicPartition::<f64>::new(g).unwrap();
        let th = to_spectral(&noise(g, seed)).unwrap();
        let r = helicity_flux_terms(&th, CoarseGraining::LowPass { n, partition: &part }, Axis::X1, gamma).unwrap();
        let big = r.terms.iter().flatten().fold(0.0f64, |m, t| m.max(t.abs()));
        prop_assert!(r.total.abs() <= 1e-9 * big.max(1e-300));
    }

    #[test]
    fn energy_flux_odd_in_theta(seed in any::<u64>(), n in 1i32..=4) {
        let g = Grid::new(32).unwrap();
        let part = DyadicPartition::<f64>::new(g).unwrap();
        let th = to_spectral(&noise(g, seed)).unwrap();
        let a = energy_flux_lp(&th, n, 2.0, 1.0, &part, None).unwrap();
        let b = energy_flux_lp(&th.scale(-1.0), n, 2.0, 1.0, &part, None).unwrap();
        prop_assert!(a.total.is_finite());
        prop_assert!((a.total + b.total).abs() <= 1e-12 * a.total.abs().max(1e-300));
    }
}
