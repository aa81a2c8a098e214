mod common;

use std::f64::consts::PI;

use common::*;
use gsqg_core::diagnostics::energy_flux_lp;
use gsqg_core::io::{parse_config_str, DiagnosticSeries};
use gsqg_core::lp::{low_pass, DyadicPartition};
use gsqg_core::solver::*;
use gsqg_core::spectral::*;
use gsqg_core::{Complex, Error, Grid, PhysicalField, SpectralField};
use proptest::prelude::*;

fn state(theta: SpectralField<f64>, gamma: f64) -> SolverState<f64> {
    SolverState::new(theta, gamma).unwrap()
}

fn cosine_state(g: Grid, gamma: f64) -> SolverState<f64> {
    let th = to_spectral(&PhysicalField::from_fn(g, |x: f64, _| x.cos())).unwrap();
    state(th, gamma)
}

fn advance(
    mut s: SolverState<f64>,
    dt: f64,
    steps: usize,
    policy: &StepPolicy,
) -> SolverState<f64> {
    for _ in 0..steps {
        s = step_rk4_dt(&s, dt, policy).unwrap();
    }
    s
}

#[test]
fn nonlinear_term_examples() {
    let g = Grid::new(64).unwrap();
    let zero = state(SpectralField::zeros(g), 1.0);
    for form in [NonlinearForm::Divergence, NonlinearForm::Advective] {
        assert_eq!(nonlinear_term(&zero, form).unwrap().max_abs(), 0.0);
        let c = cosine_state(g, 1.0);
        assert!(to_physical(&nonlinear_term(&c, form).unwrap()).max_abs() < 1e-13);
    }
}

#[test]
fn radial_field_is_steady_at_gamma_one() {
    // lattice analogue of J₀(5|x − x₀|): every mode with |k| = 5, centred at x₀
    let g = Grid::new(64).unwrap();
    let x0 = (1.3, 2.1);
    let mut modes = Vec::new();
    for (k1, k2) in [(5, 0), (0, 5), (3, 4), (4, 3), (-3, 4), (-4, 3)] {
        let ph = -(k1 as f64 * x0.0 + k2 as f64 * x0.1);
        modes.push((k1, k2, Complex::from_polar(0.5, ph)));
    }
    let th = SpectralField::from_modes(g, &modes);
    for gamma in [0.5, 1.0, 1.5] {
        let nl = nonlinear_term(&state(th.clone(), gamma), NonlinearForm::Divergence).unwrap();
        assert!(to_physical(&nl).max_abs() < 1e-10, "γ = {gamma}");
    }
}

#[test]
fn zero_field_is_a_fixed_point() {
    let g = Grid::new(32).unwrap();
    let s = state(SpectralField::zeros(g), 1.0);
    let next = step_rk4(&s, &StepPolicy::default()).unwrap();
    assert_eq!(next.theta, s.theta);
    assert!(next.time > 0.0 && next.step_count == 1);
}

#[test]
fn steady_mode_thousand_steps() {
    let g = Grid::new(64).unwrap();
    let s0 = cosine_state(g, 1.0);
    let policy = StepPolicy::default();
    let mut s = s0.clone();
    for _ in 0..1000 {
        s = step_rk4(&s, &policy).unwrap();
    }
    let dev = max_diff(
        to_physical(&s.theta).values(),
        to_physical(&s0.theta).values(),
    );
    assert!(dev < 1e-10, "{dev}");
    assert_eq!(s.step_count, 1000);
}

#[test]
fn temporal_order_is_four() {
    let g = Grid::new(64).unwrap();
    let th = smooth_spectrum(g, 4.0, 21);
    let th = th.scale(1.0 / th.power_sum().sqrt());
    let s0 = state(th, 1.0);
    let policy = StepPolicy::default();
    let horizon = 0.1;
    let run = |steps: usize| advance(s0.clone(), horizon / steps as f64, steps, &policy).theta;
    let (a, b, c) = (run(4), run(8), run(16));
    let e1 = a.sub(&b).unwrap().l2_norm();
    let e2 = b.sub(&c).unwrap().l2_norm();
    let order = (e1 / e2).log2();
    assert!((3.7..=4.3).contains(&order), "order {order}");
}

#[test]
fn strict_cfl_reports_velocity() {
    let g = Grid::new(64).unwrap();
    let s = cosine_state(g, 1.0);
    let policy = StepPolicy {
        strict_cfl: true,
        ..StepPolicy::fixed(1.0)
    };
    match step_rk4(&s, &policy) {
        Err(Error::Cfl { max_velocity, .. }) => assert!((max_velocity - 1.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert!(step_rk4(&s, &StepPolicy::fixed(1.0)).is_ok());
    assert!(StepPolicy::fixed(-1.0).validate().is_err());
    assert!(StepPolicy {
        cfl_number: 1.0,
        ..StepPolicy::default()
    }
    .validate()
    .is_err());
}

#[test]
fn filter_only_touches_high_modes() {
    let g = Grid::new(64).unwrap();
    let rough = to_spectral(&noise(g, 3)).unwrap();
    let f = exponential_filter(&rough);
    let low = rough.coeff(3, 2);
    assert!((f.coeff(3, 2) - low).norm() < 1e-15 * low.norm().max(1.0));
    assert!(f.coeff(21, 0).norm() < rough.coeff(21, 0).norm() * 0.05);
    assert!(f.coeff(-32, -32).norm() < 1e-12);
}

#[test]
fn l2_conserved_per_step_and_mean_invariant() {
    let g = Grid::new(64).unwrap();
    let th = smooth_spectrum(g, 5.0, 8)
        .add(&SpectralField::from_modes(g, &[]))
        .unwrap();
    let mut th = th;
    th = th.map_modes(|idx, c| if idx == 0 { Complex::new(0.37, 0.0) } else { c });
    let mut s = state(th, 1.0);
    let policy = StepPolicy {
        filter: false,
        ..StepPolicy::default()
    };
    let e0 = s.theta.power_sum();
    for _ in 0..20 {
        let dt = stable_dt(&s, &policy).unwrap();
        let before = s.theta.power_sum();
        s = step_rk4(&s, &policy).unwrap();
        let change = (s.theta.power_sum() - before).abs() / before;
        assert!(
            change
                < 10.0 * dt.powi(5) * s.max_velocity().unwrap().powi(5)
                    / g.spacing::<f64>().powi(5)
                    + 1e-14
        );
        assert_eq!(s.theta.mean(), 0.37);
    }
    let drift = rel(s.theta.power_sum(), e0);
    assert!(drift < 1e-6, "{drift}");
}

#[test]
fn forms_agree_on_band_limited_data() {
    let g = Grid::new(128).unwrap();
    let th = smooth_spectrum(g, 3.0, 12);
    let s = state(th, 1.2);
    let a = nonlinear_term(&s, NonlinearForm::Divergence).unwrap();
    let b = nonlinear_term(&s, NonlinearForm::Advective).unwrap();
    assert!(spec_diff(&a, &b) < 1e-12 * a.max_abs());
}

#[test]
fn euler_limit_matches_small_gamma() {
    let g = Grid::new(64).unwrap();
    let th = smooth_spectrum(g, 4.0, 30);
    let policy = StepPolicy::default();
    let a = advance(state(th.clone(), 0.0), 0.01, 20, &policy);
    let b = advance(state(th, 1e-12), 0.01, 20, &policy);
    assert!(spec_diff(&a.theta, &b.theta) < 1e-8);
}

#[test]
fn filtered_energy_rate_matches_flux() {
    let g = Grid::new(128).unwrap();
    let part = DyadicPartition::<f64>::new(g).unwrap();
    let th = smooth_spectrum(g, 8.0, 31);
    let s = state(th, 1.0);
    let policy = StepPolicy {
        filter: false,
        ..StepPolicy::default()
    };
    let dt = 1e-4;
    let back = SolverState {
        theta: s.theta.clone(),
        ..s.clone()
    };
    let plus = step_rk4_dt(&s, dt, &policy).unwrap();
    let minus = step_rk4_dt(&back, -dt, &policy).unwrap();
    for n in 1..=part.jmax() {
        let energy = |f: &SpectralField<f64>| {
            0.5 * 4.0 * PI * PI * low_pass(f, n, &part).unwrap().power_sum()
        };
        let fd = (energy(&plus.theta) - energy(&minus.theta)) / (2.0 * dt);
        let flux = energy_flux_lp(&s.theta, n, 2.0, 1.0, &part, None)
            .unwrap()
            .total;
        assert!(
            rel(fd, flux) < 1e-4 || (fd - flux).abs() < 1e-10,
            "N={n}: {fd} vs {flux}"
        );
    }
}

#[test]
fn checkpoint_round_trip_and_corruption() {
    let g = Grid::new(32).unwrap();
    let mut s = state(smooth_spectrum(g, 3.0, 2), 0.7);
    s.time = 0.125;
    s.step_count = 42;
    let bytes = encode_checkpoint(&s);
    assert_eq!(&bytes[..5], CHECKPOINT_MAGIC);
    assert_eq!(u64::from_le_bytes(bytes[5..13].try_into().unwrap()), 32);
    let back = decode_checkpoint::<f64>(&bytes).unwrap();
    assert_eq!(back, s);
    assert!(matches!(
        decode_checkpoint::<f64>(&bytes[..bytes.len() - 1]),
        Err(Error::Checkpoint(_))
    ));
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_checkpoint::<f64>(&bad).is_err());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    write_checkpoint(&path, &s).unwrap();
    assert_eq!(read_checkpoint::<f64>(&path).unwrap(), s);
}

fn sim_config(extra: &str) -> gsqg_core::io::RunConfig {
    parse_config_str(&format!(
        r#"{{"mode":"simulate","n":32,"gamma":1.0,{extra}}}"#
    ))
    .unwrap()
}

#[test]
fn run_with_zero_horizon_has_one_record() {
    let c = sim_config(r#""horizon":0,"ic":{"kind":"smooth_random"},"seed":4"#);
    let out = run(&c, None).unwrap();
    assert_eq!(out.series.rows.len(), 1);
    assert_eq!(out.series.column("time").unwrap(), vec![0.0]);
}

#[test]
fn run_lands_on_schedule_and_restarts_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let full = sim_config(
        r#""horizon":1.0,"ic":{"kind":"smooth_random"},"seed":9,"checkpoint_interval":0.5,"diagnostics":{"interval":0.25}"#,
    );
    let out = run(&full, Some(dir.path())).unwrap();
    assert_eq!(
        out.series.column("time").unwrap(),
        vec![0.0, 0.25, 0.5, 0.75, 1.0]
    );
    let half = out.checkpoints[0].clone();
    let at_half = read_checkpoint::<f64>(&half).unwrap();
    assert_eq!(at_half.time, 0.5);
    let final_full = read_checkpoint::<f64>(&dir.path().join("final.bin")).unwrap();

    let dir2 = tempfile::tempdir().unwrap();
    let restart = sim_config(&format!(
        r#""horizon":1.0,"ic":{{"kind":"checkpoint","path":{}}},"checkpoint_interval":0.5,"diagnostics":{{"interval":0.25}}"#,
        serde_json::to_string(&half).unwrap()
    ));
    run(&restart, Some(dir2.path())).unwrap();
    let final_restart = read_checkpoint::<f64>(&dir2.path().join("final.bin")).unwrap();
    assert_eq!(final_restart.time, 1.0);
    assert!(spec_diff(&final_full.theta, &final_restart.theta) < 1e-12);
}

#[test]
fn blowup_aborts_with_checkpoint_path() {
    // a huge fixed step on rough data overflows within a few steps
    let dir = tempfile::tempdir().unwrap();
    let c = sim_config(
        r#""horizon":1000.0,"ic":{"kind":"smooth_random","peak":12,"rms":100},"seed":1,"dt":{"policy":"fixed","value":5.0},"checkpoint_interval":5.0"#,
    );
    let out = run(&c, Some(dir.path())).unwrap();
    let err = out.abort.expect("run should abort");
    match &err {
        Error::Blowup { checkpoint, .. } => {
            if let Some(p) = checkpoint {
                assert!(p.exists());
            }
        }
        other => panic!("{other:?}"),
    }
    let text = out.series.to_csv();
    assert!(text.contains("# abort: "));
    let parsed = DiagnosticSeries::parse(&text).unwrap();
    assert!(parsed.abort.is_some());
}

#[test]
fn single_precision_step() {
    let g = Grid::new(32).unwrap();
    let th = to_spectral(&PhysicalField::<f32>::from_fn(g, |x: f32, _| x.cos())).unwrap();
    let s = SolverState::new(th, 1.0f32).unwrap();
    let next = step_rk4(&s, &StepPolicy::default()).unwrap();
    let dev = next.theta.sub(&s.theta).unwrap().max_abs();
    assert!(dev < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn steps_keep_symmetry_mean_and_time(seed in any::<u64>(), gamma in 0.0f64..=2.0) {
        let g = Grid::new(32).unwrap();
        let th = smooth_spectrum(g, 3.0, seed);
        let mut s = state(th, gamma);
        let policy = StepPolicy::default();
        let mean = s.theta.mean();
        for _ in 0..3 {
            let next = step_rk4(&s, &policy).unwrap();
            prop_assert!(next.time > s.time);
            prop_assert!(next.theta.hermitian_defect() <= 1e-12 * next.theta.max_abs());
            prop_assert!((next.theta.mean() - mean).abs() <= 1e-12);
            let [v1, v2] = riesz_perp_velocity(&next.theta, gamma).unwrap();
            prop_assert!(divergence(&v1, &v2).unwrap().max_abs() < 1e-13);
            s = next;
        }
    }
}
