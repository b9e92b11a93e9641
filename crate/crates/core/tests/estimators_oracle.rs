//! Estimators on analytic quasi-static signals and on simulated logs.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::OnceLock;

use dyadic_stiffness::estimators::{
    build_naive, build_nwls, build_ols, estimate_all, solve_weighted_slope, EstimatorSettings,
    ExpertObservations, DEFAULT_EPSILON,
};
use dyadic_stiffness::oracle::{generate, naive_bias_closed_form, QuasiStaticSpec};
use dyadic_stiffness::sim::{simulate_trial, PlantParams, TrialLog};
use proptest::prelude::*;

const DELAYS: [f64; 4] = [0.0, 0.08, 0.16, 0.32];
const LEVELS: [f64; 2] = [60.0, 120.0];

/// Composite Simpson estimate of the full-period Naive slope
/// ∫ f1·x̂2 dt / ∫ x̂2² dt for sinusoidal quasi-static signals.
fn naive_by_quadrature(k: f64, k0: f64, omega: f64, delay: f64) -> f64 {
    let gain = k / (k + k0);
    let x1 = |t: f64| 0.05 * (omega * t).sin();
    let x2_hat = |t: f64| gain * x1(t - 2.0 * delay);
    let f1 = |t: f64| k * (x1(t) - x2_hat(t));
    let simpson = |g: &dyn Fn(f64) -> f64| {
        let n = 4000;
        let h = TAU / omega / n as f64;
        let inner: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h)).sum();
        (g(0.0) + inner + g(n as f64 * h)) * h / 3.0
    };
    simpson(&|t| f1(t) * x2_hat(t)) / simpson(&|t| x2_hat(t).powi(2))
}

#[test]
fn quadrature_confirms_naive_closed_form() {
    for delay in [0.0, 0.04, 0.08, 0.16, 0.32, 0.5, FRAC_PI_2 / (2.0 * 0.518)] {
        for k0 in [0.0, 60.0, 120.0] {
            let quad = naive_by_quadrature(200.0, k0, 0.518, delay);
            let closed = naive_bias_closed_form(200.0, k0, 0.518, delay);
            assert!((quad - closed).abs() < 1e-9, "delay {delay} k0 {k0}: {quad} vs {closed}");
        }
    }
    // the quarter-wave round trip inverts the sign
    let quarter = FRAC_PI_2 / (2.0 * 0.518);
    assert!((naive_by_quadrature(200.0, 60.0, 0.518, quarter) + 200.0).abs() < 1e-9);
}

#[test]
fn naive_closed_form_reference_values() {
    assert!((naive_bias_closed_form(200.0, 60.0, 0.518, 0.32) - 45.84).abs() < 0.01);
    assert!((naive_bias_closed_form(200.0, 60.0, 0.518, 0.08) - 59.1).abs() < 0.01);
    assert_eq!(naive_bias_closed_form(200.0, 60.0, 0.518, 0.0), 60.0);
}

#[test]
fn oracle_estimates_over_default_grid() {
    for delay in DELAYS {
        for k0 in LEVELS {
            let sig = generate(QuasiStaticSpec::with(delay, k0)).unwrap();
            let naive = solve_weighted_slope(&build_naive(&sig, 0).unwrap()).unwrap().stiffness;
            let ols = solve_weighted_slope(&build_ols(&sig, 0).unwrap()).unwrap().stiffness;
            let nwls = solve_weighted_slope(&build_nwls(&sig, 0, DEFAULT_EPSILON).unwrap()).unwrap().stiffness;
            assert!((ols / k0 - 1.0).abs() < 1e-6, "ols {ols} at delay {delay} k0 {k0}");
            assert!((nwls / k0 - 1.0).abs() < 1e-6, "nwls {nwls} at delay {delay} k0 {k0}");
            let predicted = naive_bias_closed_form(200.0, k0, 0.518, delay);
            assert!((naive - predicted).abs() < 1e-6, "naive {naive} vs {predicted}");
        }
    }
}

#[test]
fn oracle_naive_error_grows_with_delay() {
    for k0 in LEVELS {
        let errors: Vec<f64> = DELAYS
            .iter()
            .map(|&d| {
                let sig = generate(QuasiStaticSpec::with(d, k0)).unwrap();
                let k = solve_weighted_slope(&build_naive(&sig, 0).unwrap()).unwrap().stiffness;
                (k - k0).abs()
            })
            .collect();
        assert!(errors.windows(2).all(|w| w[0] < w[1]), "k0 {k0}: {errors:?}");
    }
}

#[test]
fn zero_stiffness_oracle_gives_zero() {
    let sig = generate(QuasiStaticSpec::with(0.16, 0.0)).unwrap();
    let ols = solve_weighted_slope(&build_ols(&sig, 0).unwrap()).unwrap().stiffness;
    assert!(ols.abs() < 1e-9);
}

/// Oracle signals with a force disturbance that only acts near the
/// deflection peaks (the turnaround points of the coupling spring).
struct Disturbed {
    base: dyadic_stiffness::oracle::QuasiStaticSignals,
    f1: Vec<f64>,
}

impl ExpertObservations for Disturbed {
    fn expert_force(&self) -> &[f64] {
        &self.f1
    }
    fn expert_position(&self) -> &[f64] {
        self.base.expert_position()
    }
    fn novice_position_received(&self) -> &[f64] {
        self.base.novice_position_received()
    }
    fn expert_position_round_trip(&self) -> &[f64] {
        self.base.expert_position_round_trip()
    }
    fn received_rest_position(&self) -> f64 {
        self.base.received_rest_position()
    }
}

#[test]
fn turnaround_disturbance_biases_ols_more_than_nwls() {
    for delay in DELAYS {
        for k0 in LEVELS {
            for (magnitude, sharpness) in [(0.3, 8), (1.0, 4), (-0.5, 16)] {
                let base = generate(QuasiStaticSpec::with(delay, k0)).unwrap();
                let deflection: Vec<f64> = base.x1.iter().zip(&base.x2_hat).map(|(a, b)| a - b).collect();
                let peak = deflection.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let f1 = base
                    .f1
                    .iter()
                    .zip(&deflection)
                    .map(|(f, d)| {
                        let s = d / peak;
                        f + magnitude * s.signum() * s.abs().powi(sharpness)
                    })
                    .collect();
                let d = Disturbed { base, f1 };
                let ols = solve_weighted_slope(&build_ols(&d, 0).unwrap()).unwrap().stiffness;
                let nwls = solve_weighted_slope(&build_nwls(&d, 0, DEFAULT_EPSILON).unwrap()).unwrap().stiffness;
                assert!(
                    (ols - k0).abs() >= (nwls - k0).abs(),
                    "delay {delay} k0 {k0} m {magnitude}: ols {ols} nwls {nwls}"
                );
            }
        }
    }
}

fn noisy_delayed_log() -> &'static (TrialLog, usize) {
    static LOG: OnceLock<(TrialLog, usize)> = OnceLock::new();
    LOG.get_or_init(|| {
        let p = PlantParams { delay: 0.16, friction: 0.3, sigma_x: 1e-4, sigma_f: 0.05, ..Default::default() };
        (simulate_trial(&p, 2.0 * p.period(), 5).unwrap(), p.samples_for_periods(1.0))
    })
}

#[test]
fn zero_delay_ols_ratio_collapses_to_naive() {
    let p = PlantParams { sigma_x: 1e-4, sigma_f: 0.05, friction: 0.3, ..Default::default() };
    let log = simulate_trial(&p, p.period(), 3).unwrap();
    let naive = build_naive(&log, 0).unwrap();
    let ols = build_ols(&log, 0).unwrap();
    let mut compared = 0;
    for i in 0..naive.len() {
        if naive.regressor[i].abs() > 1e-12 && ols.regressor[i].abs() > 1e-12 {
            let a = ols.response[i] / ols.regressor[i];
            let b = naive.response[i] / naive.regressor[i];
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "sample {i}: {a} vs {b}");
            compared += 1;
        }
    }
    assert!(compared > naive.len() / 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn force_scaling_scales_every_estimate(c in 0.01f64..100.0) {
        let (log, warmup) = noisy_delayed_log();
        let settings = EstimatorSettings { warmup_samples: *warmup, epsilon: DEFAULT_EPSILON };
        let a = estimate_all(log, &settings).unwrap();
        let b = estimate_all(&log.rescaled(1.0, c), &settings).unwrap();
        for (x, y) in [(a.reference, b.reference), (a.naive, b.naive), (a.ols, b.ols), (a.nwls, b.nwls)] {
            prop_assert!((y.stiffness - c * x.stiffness).abs() <= 1e-9 * (c * x.stiffness).abs());
        }
    }

    #[test]
    fn position_scaling_divides_every_estimate(c in 0.01f64..100.0) {
        let (log, warmup) = noisy_delayed_log();
        let settings = EstimatorSettings { warmup_samples: *warmup, epsilon: DEFAULT_EPSILON };
        // the regulariser is a length, so it scales with the positions
        let scaled = EstimatorSettings { epsilon: c * DEFAULT_EPSILON, ..settings };
        let a = estimate_all(log, &settings).unwrap();
        let b = estimate_all(&log.rescaled(c, 1.0), &scaled).unwrap();
        for (x, y) in [(a.reference, b.reference), (a.naive, b.naive), (a.ols, b.ols), (a.nwls, b.nwls)] {
            prop_assert!((y.stiffness - x.stiffness / c).abs() <= 1e-9 * (x.stiffness / c).abs());
        }
    }

    #[test]
    fn oracle_ols_nwls_exact_off_grid(delay_steps in 0usize..400, k0 in 5.0f64..300.0) {
        let sig = generate(QuasiStaticSpec::with(delay_steps as f64 * 1e-3, k0)).unwrap();
        let ols = solve_weighted_slope(&build_ols(&sig, 0).unwrap()).unwrap().stiffness;
        let nwls = solve_weighted_slope(&build_nwls(&sig, 0, DEFAULT_EPSILON).unwrap()).unwrap().stiffness;
        prop_assert!((ols / k0 - 1.0).abs() < 1e-6);
        prop_assert!((nwls / k0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn naive_closed_form_decreases_until_quarter_wave(a in 0.0f64..FRAC_PI_2, b in 0.0f64..FRAC_PI_2, k0 in 0.0f64..300.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let omega = 0.518;
        let at = |phase: f64| naive_bias_closed_form(200.0, k0, omega, phase / (2.0 * omega));
        prop_assert!(at(lo) > at(hi));
    }
}
