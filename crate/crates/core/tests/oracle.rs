//! Independent-oracle checks: every derived identity is verified against a
//! computation that never touches the code path it certifies.

mod common;

use oscbif_core::nonlinearity::Nonlinearity;
use oscbif_core::quadrature::{fhat, integrate};
use oscbif_core::radial::{lambda_bar, RadialConfig};
use oscbif_core::shooting::shooting_lambda;
use oscbif_core::timemap::{lambda_of_nu_tol, profile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

/// f̂ for the divergent family at its first peak, against a midpoint rule
/// on the substituted integrand with 10^7 uniform points.
#[test]
fn fhat_first_peak_against_midpoint_rule() {
    let nu1 = 2.5 * PI;
    let nl = Nonlinearity::sine_u(0.0).unwrap();
    let big_f = |t: f64| t - t.cos() + 1.0;
    let f_nu = nl.eval_f(nu1).unwrap();
    let big_f_nu = big_f(nu1);

    let n = 10_000_000usize;
    let w_max = nu1.sqrt();
    let h = w_max / n as f64;
    let mut oracle = 0.0f64;
    for i in 0..n {
        let w = (i as f64 + 0.5) * h;
        let gap = big_f_nu - big_f(nu1 - w * w);
        oracle += if gap > 0.0 { 2.0 * w / gap.sqrt() } else { 2.0 / f_nu.sqrt() };
    }
    oracle *= h;

    let q = fhat(&nl, nu1, 1e-12).unwrap();
    assert!(
        (q.value - oracle).abs() / oracle < 1e-6,
        "fhat {} vs midpoint oracle {oracle}",
        q.value
    );
    // frozen value from the oracle run
    assert!((q.value - 4.872212786627).abs() < 1e-9);
}

/// The time-map identity λ(ν) = 2 f̂(ν)²/L² against the shooting solver,
/// pinned at the first peak of the divergent family.
#[test]
fn time_map_identity_at_first_peak() {
    let nl = Nonlinearity::sine_u(0.0).unwrap();
    let nu1 = 2.5 * PI;
    let tm = lambda_of_nu_tol(&nl, 1.0, nu1, 1e-11).unwrap();
    let sh = shooting_lambda(&nl, 1.0, nu1, 12_000).unwrap();
    assert!((tm - sh.lambda).abs() / tm < 1e-8, "timemap {tm} vs shooting {}", sh.lambda);
    // frozen value from the oracle run
    assert!((tm - 47.476914876351).abs() < 1e-7);
}

/// 20 random admissible cases, both families: time map vs shooting within
/// 1e-6 relative.
#[test]
fn twenty_random_time_map_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for case in common::sample_oracle_cases(&mut rng, 20) {
        let tm = lambda_of_nu_tol(&case.nl, case.length, case.nu, 1e-9).unwrap();
        let sh = shooting_lambda(&case.nl, case.length, case.nu, case.steps).unwrap();
        let rel = (tm - sh.lambda).abs() / tm;
        assert!(rel <= 1e-6, "{}: timemap {tm} vs shooting {} (rel {rel:.2e})", case.label, sh.lambda);
    }
}

/// Radial bound against a shooting solve of the reduced constant-coefficient
/// problem on `(a, b)`.
#[test]
fn radial_bound_against_reduced_shooting() {
    let nl = Nonlinearity::sine_u(0.0).unwrap();
    let nu1 = 2.5 * PI;
    let cfg = RadialConfig::<f64>::new(3, 1.0).unwrap();
    let lb = lambda_bar(&nl, 3, 1.0, nu1).unwrap();
    // -z'' = (λ̄ w) f(z) on an interval of length b-a is the plain problem
    // with parameter λ̄·w
    let sh = shooting_lambda(&nl, cfg.b - cfg.a, nu1, 12_000).unwrap();
    let oracle = sh.lambda / cfg.weight_inf();
    assert!((lb - oracle).abs() / lb < 1e-8, "lambda_bar {lb} vs shooting {oracle}");
    // frozen value from the oracle run
    assert!((lb - 759.6306380216).abs() < 1e-6);
}

/// Antiderivative closed form for `t (1 + sin t)` at `t = π`, certified by
/// quadrature before trusting the integration-by-parts expression.
#[test]
fn antiderivative_closed_form_certified() {
    let nl = Nonlinearity::sine_u(1.0).unwrap();
    let oracle = integrate(|t: f64| nl.eval_f(t).unwrap(), 0.0, PI, 1e-13).unwrap().value;
    let closed = nl.eval_big_f(PI).unwrap();
    assert!((closed - oracle).abs() < 1e-11);
    // ∫_0^π t(1+sin t) dt = π²/2 + [sin t - t cos t]_0^π = π²/2 + π
    let expect = PI * PI / 2.0 + PI;
    assert!((closed - expect).abs() < 1e-12);
    assert!((expect - 8.076394854134472).abs() < 1e-14);
}

/// Reconstructed profiles satisfy the differential equation: the centered
/// second difference of u matches -λ f(u) at second order in the grid.
#[test]
fn profile_residual_decays_at_second_order() {
    let nl = Nonlinearity::sine_u(0.0).unwrap();
    let nu = 2.5 * PI;
    let lambda = lambda_of_nu_tol(&nl, 1.0, nu, 1e-11).unwrap();
    let mut residuals = Vec::new();
    for samples in [64usize, 128, 256] {
        let pts = profile(&nl, 1.0, nu, samples).unwrap();
        let h = 1.0 / samples as f64;
        let mut worst = 0.0f64;
        // skip the three cells next to each boundary and the peak cell:
        // u'' is discontinuity-free but the interpolation error concentrates
        // at the stitching points
        for i in 3..samples - 2 {
            if (i as i64 - (samples / 2) as i64).abs() <= 1 {
                continue;
            }
            let upp = (pts[i - 1].1 - 2.0 * pts[i].1 + pts[i + 1].1) / (h * h);
            let res = (upp + lambda * nl.eval_f(pts[i].1).unwrap()).abs();
            worst = worst.max(res);
        }
        residuals.push(worst);
    }
    // halving h divides the residual by ~4; allow slack for interpolation
    assert!(
        residuals[2] < residuals[0] / 8.0,
        "residuals not decaying at second order: {residuals:?}"
    );
    assert!(residuals[2] < 0.2, "absolute residual too large: {residuals:?}");
}

/// The reduced radial profile satisfies -z'' = λ̄ (R/2)^{2(N-1)} f₁(z).
#[test]
fn reduced_profile_residual() {
    let f1 = Nonlinearity::sine_u(0.0).unwrap();
    let nu = 2.5 * PI;
    let cfg = RadialConfig::<f64>::new(3, 1.0).unwrap();
    let lb = lambda_bar(&f1, 3, 1.0, nu).unwrap();
    let mu = lb * cfg.weight_inf();
    let mut residuals = Vec::new();
    for samples in [64usize, 256] {
        let pts = oscbif_core::radial::reduced_profile(&f1, 3, 1.0, nu, samples).unwrap();
        let h = (cfg.b - cfg.a) / samples as f64;
        let mut worst = 0.0f64;
        for i in 3..samples - 2 {
            if (i as i64 - (samples / 2) as i64).abs() <= 1 {
                continue;
            }
            let zpp = (pts[i - 1].1 - 2.0 * pts[i].1 + pts[i + 1].1) / (h * h);
            worst = worst.max((zpp + mu * f1.eval_f(pts[i].1).unwrap()).abs());
        }
        residuals.push(worst);
    }
    assert!(residuals[1] < residuals[0] / 8.0, "residuals: {residuals:?}");
}
