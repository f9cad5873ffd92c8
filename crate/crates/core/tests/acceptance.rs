//! Acceptance suite: one test per quantitative exit criterion, each printing
//! a pass/fail line (run with `--nocapture` to see them).

mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use oscbif_core::asymptotics::{classify, divergence_check, fit_exponent, Regime, Side};
use oscbif_core::nonlinearity::Nonlinearity;
use oscbif_core::quadrature::{alternating_term, fhat, hn_infimum, oscillatory_integral, WindowFamily};
use oscbif_core::radial::{lambda_bar, lambda_upper_sequence};
use oscbif_core::shooting::shooting_lambda;
use oscbif_core::timemap::{
    branch, lambda_n_sequence_range, lambda_of_nu_tol, solutions_at_lambda, LambdaSequence,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

fn report(id: &str, pass: bool, detail: &str) {
    println!("[{}] criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// 1. Closed-form quadrature values.
#[test]
fn acceptance_01_closed_form_quadrature() {
    let lin = Nonlinearity::linear(1.0).unwrap();
    let expect = PI / 2.0f64.sqrt();
    let mut worst = 0.0f64;
    for nu in [0.1, 1.0, 10.0] {
        worst = worst.max((fhat(&lin, nu, 1e-12).unwrap().value - expect).abs());
    }
    let con = Nonlinearity::constant(1.0).unwrap();
    for nu in [0.1f64, 1.0, 4.0, 10.0] {
        worst = worst.max((fhat(&con, nu, 1e-12).unwrap().value - 2.0 * nu.sqrt()).abs());
    }
    report("1", worst < 1e-8, &format!("fhat closed forms, worst abs dev {worst:.2e} (tol 1e-8)"));
}

/// 2. Flat branch of the linear family at the first eigenvalue.
#[test]
fn acceptance_02_eigenvalue_sanity() {
    let lin = Nonlinearity::linear(1.0).unwrap();
    let mut worst = 0.0f64;
    for nu in [0.05, 0.7, 3.0, 50.0] {
        worst = worst.max((lambda_of_nu_tol(&lin, 1.0, nu, 1e-12).unwrap() - PI * PI).abs());
    }
    report("2", worst < 1e-8, &format!("lambda(linear) vs pi^2, worst abs dev {worst:.2e} (tol 1e-8)"));
}

/// 3. Time map vs shooting oracle on 20 random cases.
#[test]
fn acceptance_03_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut worst = 0.0f64;
    for case in common::sample_oracle_cases(&mut rng, 20) {
        let tm = lambda_of_nu_tol(&case.nl, case.length, case.nu, 1e-9).unwrap();
        let sh = shooting_lambda(&case.nl, case.length, case.nu, case.steps).unwrap();
        let rel = (tm - sh.lambda).abs() / tm;
        assert!(rel <= 1e-6, "{}: rel {rel:.2e}", case.label);
        worst = worst.max(rel);
    }
    report("3", worst <= 1e-6, &format!("20 shooting comparisons, worst rel {worst:.2e} (tol 1e-6)"));
}

/// 4. Oscillatory integral bound and its small-ν power law.
#[test]
fn acceptance_04_oscillatory_bound() {
    let mut pass = true;
    let mut detail = String::new();
    for &r in &[-1.0f64, 0.0, 1.0, 3.0] {
        let rel = if r < 0.0 { 1e-3 } else { 1e-6 };
        for &nu in &[1e-3f64, 1e-2, 0.1, 1.0, 10.0] {
            let scale = (PI + 2.0) * nu.powf(r + 2.0);
            let q = oscillatory_integral(r, nu, rel * scale).unwrap();
            if q.value.abs() > scale * (1.0 + 1e-9) + q.abs_error_estimate {
                pass = false;
                detail = format!("bound violated at r={r}, nu={nu}");
            }
        }
        // slope of log|value| vs log nu over nu <= 1e-2, sampled at
        // nu = 1/(πk) where cos(1/ν) = ±1 keeps the oscillatory prefactor
        // away from its zeros
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in [32u64, 48, 72, 108, 162, 243] {
            let nu = 1.0 / (PI * k as f64);
            let scale = (PI + 2.0) * nu.powf(r + 2.0);
            let q = oscillatory_integral(r, nu, 1e-4 * scale).unwrap();
            xs.push(nu.ln());
            ys.push(q.value.abs().ln());
        }
        let slope = log_slope(&xs, &ys);
        if (slope - (r + 2.0)).abs() > 0.1 {
            pass = false;
            detail = format!("slope {slope:.3} vs {} at r={r}", r + 2.0);
        }
    }
    // the alternating terms behind the tail bound are positive and decreasing
    for &r in &[-1.0f64, 0.0, 3.0] {
        let mut prev = f64::INFINITY;
        for k in 1..80 {
            let a = alternating_term(r, k);
            if !(a > 0.0 && a < prev) {
                pass = false;
                detail = format!("alternating terms not positive-decreasing at r={r}, k={k}");
            }
            prev = a;
        }
    }
    if detail.is_empty() {
        detail = "bound holds on the (r, nu) grid; slopes match r+2 within 0.1".into();
    }
    report("4", pass, &detail);
}

/// 5. Window-average infima stay positive with no decay, both families.
#[test]
fn acceptance_05_hn_infima() {
    let mut pass = true;
    let mut detail = String::new();
    for family in ["sine_u", "inverse_sine_u"] {
        for &r in &[0.0f64, 0.5, 1.0, 2.0] {
            let nl = match family {
                "sine_u" => Nonlinearity::sine_u(r).unwrap(),
                _ => Nonlinearity::inverse_sine_u(r).unwrap(),
            };
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for n in 1..=200u32 {
                let a = hn_infimum(&nl, n, 1000).unwrap();
                if a.inf_value <= 0.0 || a.inf_value.is_nan() {
                    pass = false;
                    detail = format!("inf <= 0 at {family} r={r} n={n}");
                }
                if n <= 100 && (a.boundary_limit - 1.0).abs() > 1e-4 {
                    pass = false;
                    detail = format!("boundary limit {} at {family} r={r} n={n}", a.boundary_limit);
                }
                xs.push((n as f64).ln());
                ys.push(a.inf_value.ln());
            }
            let slope = log_slope(&xs, &ys);
            if slope < -0.05 {
                pass = false;
                detail = format!("inf decaying: slope {slope:.4} at {family} r={r}");
            }
        }
    }
    if detail.is_empty() {
        detail = "infima positive for n <= 200, r in {0,.5,1,2}; slopes >= -0.05; boundary limits = 1".into();
    }
    report("5", pass, &detail);
}

/// Sequences shared by criteria 6 and 7: key is (family tag, 10r).
fn sequences() -> &'static HashMap<(char, u32), LambdaSequence<f64>> {
    static SEQS: OnceLock<HashMap<(char, u32), LambdaSequence<f64>>> = OnceLock::new();
    SEQS.get_or_init(|| {
        let mut map = HashMap::new();
        for &r in &[0.0f64, 0.5, 1.0, 2.0, 3.0] {
            let q = Nonlinearity::sine_u(r).unwrap();
            map.insert(('q', (r * 10.0) as u32), lambda_n_sequence_range(&q, 1.0, 10, 100, 17, 1e-7).unwrap());
            let rr = Nonlinearity::inverse_sine_u(r).unwrap();
            map.insert(('r', (r * 10.0) as u32), lambda_n_sequence_range(&rr, 1.0, 10, 100, 17, 1e-7).unwrap());
        }
        map
    })
}

/// 6. Exponent laws of the exact 1D sequences.
#[test]
fn acceptance_06_exponent_laws() {
    let mut pass = true;
    let mut lines = Vec::new();
    for &r in &[0.0f64, 0.5, 1.0, 2.0, 3.0] {
        for (tag, expect) in [('q', 1.0 - r), ('r', r - 1.0)] {
            let seq = &sequences()[&(tag, (r * 10.0) as u32)];
            let fit = fit_exponent(seq, 10).unwrap();
            let ok = (fit.slope - expect).abs() <= 0.15 && seq.failures.is_empty();
            if !ok {
                pass = false;
            }
            lines.push(format!("{tag} r={r}: slope {:.3} vs {expect:.1}", fit.slope));
        }
    }
    report("6", pass, &lines.join("; "));
}

/// 7. Regime classification matches the trichotomies.
#[test]
fn acceptance_07_trichotomy() {
    let mut pass = true;
    let mut detail = String::new();
    let expectations = [
        ('q', 0.5, Regime::NoBifurcation),
        ('q', 1.0, Regime::IntervalFromThreshold),
        ('q', 2.0, Regime::AllPositiveLambda),
        ('r', 0.5, Regime::AllPositiveLambda),
        ('r', 1.0, Regime::IntervalFromThreshold),
        ('r', 2.0, Regime::NoBifurcation),
    ];
    for (tag, r, expect) in expectations {
        let side = if tag == 'q' { Side::FromInfinity } else { Side::FromZero };
        let seq = &sequences()[&(tag, (r * 10.0) as u32)];
        match classify(seq, side) {
            Ok(c) => {
                if c.regime != expect || c.side != side {
                    pass = false;
                    detail = format!("{tag} r={r}: got {:?}", c.regime);
                }
            }
            Err(e) => {
                pass = false;
                detail = format!("{tag} r={r}: {e}");
            }
        }
    }
    if detail.is_empty() {
        detail = "all six (family, r) regimes match".into();
    }
    report("7", pass, &detail);
}

/// 8. Divergence when the zeros accumulate at a positive level.
#[test]
fn acceptance_08_divergence_at_positive_accumulation() {
    let nl = Nonlinearity::shifted_inverse_sine(0.0, 1.0).unwrap();
    let seq = lambda_n_sequence_range(&nl, 1.0, 1, 80, 17, 1e-7).unwrap();
    let diverges = divergence_check(&seq);
    let l1 = seq.entries[&1].lambda;
    let l80 = seq.entries[&80].lambda;
    let ratio = l80 / l1;
    report(
        "8",
        diverges && ratio >= 100.0,
        &format!("divergence_check = {diverges}, lambda_80/lambda_1 = {ratio:.1} (need >= 100)"),
    );
}

/// 9. ⊂-shape multiplicity on the first five windows.
#[test]
fn acceptance_09_multiplicity() {
    let nl = Nonlinearity::sine_u(0.0).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=5u32 {
        let br = branch(&nl, 1.0, n, 201).unwrap();
        for factor in [1.1, 2.0, 10.0] {
            let sols = solutions_at_lambda(&br, br.lambda_min * factor).unwrap();
            if sols.len() < 2 {
                pass = false;
                detail = format!("window {n} at {factor}x: {} solutions", sols.len());
            }
        }
        if !solutions_at_lambda(&br, br.lambda_min * 0.5).unwrap().is_empty() {
            pass = false;
            detail = format!("window {n}: solutions below the minimum");
        }
    }
    if detail.is_empty() {
        detail = ">=2 solutions at 1.1x/2x/10x and none at 0.5x, windows 1..5".into();
    }
    report("9", pass, &detail);
}

/// 10. Radial upper bounds: exponent law and exact γ-scaling.
#[test]
fn acceptance_10_radial_consistency() {
    let mut pass = true;
    let mut lines = Vec::new();
    for &r in &[0.0f64, 1.0, 2.0] {
        let seq = lambda_upper_sequence(WindowFamily::Divergent, r, 1.0, 3, 1.0, 200).unwrap();
        let zs = Nonlinearity::sine_u(r).unwrap().zeros(200).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for n in 20..=200u32 {
            let e = &seq.entries[&n];
            xs.push(zs.peak(n).unwrap().ln());
            ys.push(e.lambda.ln());
        }
        let slope = log_slope(&xs, &ys);
        if (slope - (1.0 - r)).abs() > 0.1 {
            pass = false;
        }
        lines.push(format!("r={r}: slope {:.3} vs {:.1}", slope, 1.0 - r));
    }

    // exact γ-invariance of λ̄(γ f)·γ
    let nu = Nonlinearity::sine_u(1.0).unwrap().zeros(5).unwrap().peak(5).unwrap();
    let reference = lambda_bar(&Nonlinearity::sine_u(1.0).unwrap(), 3, 1.0, nu).unwrap();
    let mut worst = 0.0f64;
    for gamma in [0.25f64, 0.5, 2.0, 8.0] {
        let scaled = Nonlinearity::sine_u(1.0).unwrap().with_gamma(gamma).unwrap();
        let l = lambda_bar(&scaled, 3, 1.0, nu).unwrap();
        worst = worst.max(((l * gamma - reference) / reference).abs());
    }
    if worst > 1e-10 {
        pass = false;
    }
    lines.push(format!("gamma-invariance worst rel {worst:.2e} (tol 1e-10)"));
    report("10", pass, &lines.join("; "));
}
