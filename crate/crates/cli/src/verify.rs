//! Verification suites: each runs a batch of quantitative checks and
//! produces a structured pass/fail report.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use oscbif_core::nonlinearity::Nonlinearity;
use oscbif_core::quadrature::{alternating_term, fhat, hn_infimum, oscillatory_integral};
use oscbif_core::shooting::shooting_lambda;
use oscbif_core::timemap::lambda_of_nu_tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;

const PI: f64 = std::f64::consts::PI;

#[derive(Serialize)]
pub struct CaseReport {
    pub id: String,
    pub inputs: String,
    pub observed: f64,
    pub bound_or_expected: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    fn new(suite: &str, cfg: &RunConfig, mut cases: Vec<CaseReport>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = cases.iter().filter(|c| c.pass).count();
        let failed = cases.len() - passed;
        Self { suite: suite.into(), config: cfg.echo(), seed: cfg.seed, cases, passed, failed }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn case(id: String, inputs: String, observed: f64, bound: f64, pass: bool) -> CaseReport {
    CaseReport { id, inputs, observed, bound_or_expected: bound, pass }
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn run_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    match cfg.suite.as_deref() {
        Some("bounds") => Ok(suite_bounds(cfg)),
        Some("hn") => Ok(suite_hn(cfg)),
        Some("bachillerato") => Ok(suite_bachillerato(cfg)),
        Some("oracle") => Ok(suite_oracle(cfg)),
        Some(other) => bail!("unknown suite `{other}` (expected bounds | hn | bachillerato | oracle)"),
        None => bail!("verify needs --suite {{bounds | hn | bachillerato | oracle}}"),
    }
}

/// Closed-form values of f̂ plus boundedness of f̂(ν_n)/ν_n^{(1-r)/2} over
/// the first 200 windows of both oscillatory families.
fn suite_bounds(cfg: &RunConfig) -> VerificationReport {
    let mut cases = Vec::new();

    let lin = Nonlinearity::linear(1.0).unwrap();
    let expect = PI / 2f64.sqrt();
    for nu in [0.1, 1.0, 10.0, 100.0] {
        let v = fhat(&lin, nu, 1e-12).unwrap().value;
        cases.push(case(
            format!("fhat_linear_nu_{nu}"),
            format!("linear slope 1, nu = {nu}"),
            v,
            expect,
            (v - expect).abs() < 1e-8,
        ));
    }
    let con = Nonlinearity::constant(1.0).unwrap();
    for nu in [0.25f64, 1.0, 4.0, 9.0] {
        let v = fhat(&con, nu, 1e-12).unwrap().value;
        let expect = 2.0 * nu.sqrt();
        cases.push(case(
            format!("fhat_constant_nu_{nu}"),
            format!("constant 1, nu = {nu}"),
            v,
            expect,
            (v - expect).abs() < 1e-8,
        ));
    }

    let n_max = cfg.n_max.max(200);
    let configs: Vec<(&str, f64)> = ["sine_u", "inverse_sine_u"]
        .iter()
        .flat_map(|f| [0.0, 0.5, 1.0, 2.0].map(|r| (*f, r)))
        .collect();
    let ratio_cases: Vec<Vec<CaseReport>> = configs
        .par_iter()
        .map(|&(family, r)| {
            let nl = match family {
                "sine_u" => Nonlinearity::sine_u(r).unwrap(),
                _ => Nonlinearity::inverse_sine_u(r).unwrap(),
            };
            let zs = nl.zeros(n_max).unwrap();
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for n in 1..=n_max {
                let nu = zs.peak(n).unwrap();
                let ratio = fhat(&nl, nu, 1e-9).unwrap().value / nu.powf((1.0 - r) / 2.0);
                if n >= 20 {
                    xs.push((n as f64).ln());
                    ys.push(ratio.ln());
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
            }
            let slope = log_slope(&xs, &ys);
            let spread = hi / lo;
            vec![
                case(
                    format!("ratio_spread_{family}_r_{r}"),
                    format!("{family} r={r}: max/min of fhat(nu_n)/nu_n^((1-r)/2), n in [20, {n_max}]"),
                    spread,
                    4.0,
                    spread <= 4.0,
                ),
                case(
                    format!("ratio_trend_{family}_r_{r}"),
                    format!("{family} r={r}: slope of log ratio vs log n"),
                    slope,
                    0.05,
                    slope.abs() <= 0.05,
                ),
            ]
        })
        .collect();
    cases.extend(ratio_cases.into_iter().flatten());
    VerificationReport::new("bounds", cfg, cases)
}

/// Window-average infima: positive for all n, no downward trend, boundary
/// limit 1.
fn suite_hn(cfg: &RunConfig) -> VerificationReport {
    let n_max = cfg.n_max.max(200);
    let configs: Vec<(&str, f64)> = ["sine_u", "inverse_sine_u"]
        .iter()
        .flat_map(|f| [0.0, 0.5, 1.0, 2.0].map(|r| (*f, r)))
        .collect();
    let cases: Vec<Vec<CaseReport>> = configs
        .par_iter()
        .map(|&(family, r)| {
            let nl = match family {
                "sine_u" => Nonlinearity::sine_u(r).unwrap(),
                _ => Nonlinearity::inverse_sine_u(r).unwrap(),
            };
            let mut min_inf = f64::INFINITY;
            let mut max_boundary_dev = 0.0f64;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for n in 1..=n_max {
                let a = hn_infimum(&nl, n, 1000).unwrap();
                min_inf = min_inf.min(a.inf_value);
                if n <= 100 {
                    max_boundary_dev = max_boundary_dev.max((a.boundary_limit - 1.0).abs());
                }
                xs.push((n as f64).ln());
                ys.push(a.inf_value.max(1e-300).ln());
            }
            let slope = log_slope(&xs, &ys);
            vec![
                case(
                    format!("hn_inf_positive_{family}_r_{r}"),
                    format!("{family} r={r}: min infimum over n <= {n_max}"),
                    min_inf,
                    0.0,
                    min_inf > 0.0,
                ),
                case(
                    format!("hn_inf_trend_{family}_r_{r}"),
                    format!("{family} r={r}: slope of log inf vs log n"),
                    slope,
                    -0.05,
                    slope >= -0.05,
                ),
                case(
                    format!("hn_boundary_{family}_r_{r}"),
                    format!("{family} r={r}: max |h_n -> 1| deviation, n <= 100"),
                    max_boundary_dev,
                    1e-4,
                    max_boundary_dev <= 1e-4,
                ),
            ]
        })
        .collect();
    VerificationReport::new("hn", cfg, cases.into_iter().flatten().collect())
}

/// Oscillatory integral against the `(π+2)ν^{r+2}` bound, its small-ν power
/// law, and monotonicity of the alternating terms.
fn suite_bachillerato(cfg: &RunConfig) -> VerificationReport {
    let mut cases = Vec::new();
    for &r in &[-1.0f64, 0.0, 1.0, 3.0] {
        let rel = if r < 0.0 { 1e-3 } else { 1e-6 };
        for &nu in &[1e-3f64, 1e-2, 0.1, 1.0, 10.0] {
            let bound = (PI + 2.0) * nu.powf(r + 2.0);
            let q = oscillatory_integral(r, nu, rel * bound).unwrap();
            cases.push(case(
                format!("bound_r_{r}_nu_{nu:e}"),
                format!("|integral(t^{r} sin(1/t), 0..{nu})| vs (pi+2) nu^(r+2)"),
                q.value.abs(),
                bound,
                q.value.abs() <= bound * (1.0 + 1e-9) + q.abs_error_estimate,
            ));
        }
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
        cases.push(case(
            format!("slope_r_{r}"),
            format!("log-log slope of |integral| vs nu over nu <= 1e-2 (expect r+2 = {})", r + 2.0),
            slope,
            r + 2.0,
            (slope - (r + 2.0)).abs() <= 0.1,
        ));

        let mut monotone = true;
        let mut prev = f64::INFINITY;
        for k in 1..80 {
            let a = alternating_term(r, k);
            if !(a > 0.0 && a < prev) {
                monotone = false;
            }
            prev = a;
        }
        cases.push(case(
            format!("terms_monotone_r_{r}"),
            format!("alternating terms a_k positive and decreasing, r = {r}, k < 80"),
            if monotone { 1.0 } else { 0.0 },
            1.0,
            monotone,
        ));
    }
    VerificationReport::new("bachillerato", cfg, cases)
}

/// Random time-map vs shooting comparisons (seeded; the seed is recorded).
fn suite_oracle(cfg: &RunConfig) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    struct Case {
        label: String,
        nl: Nonlinearity<f64>,
        nu: f64,
        length: f64,
        steps: usize,
    }
    let mut draws = Vec::new();
    for _ in 0..20 {
        let divergent = rng.gen_bool(0.5);
        let r: f64 = rng.gen_range(0.0..=3.0);
        let n: u32 = rng.gen_range(1..=4);
        let frac: f64 = rng.gen_range(0.2..=0.8);
        let length: f64 = rng.gen_range(0.7..=1.5);
        let (nl, steps, name) = if divergent {
            (Nonlinearity::sine_u(r).unwrap(), 6_000, "sine_u")
        } else {
            let steps = if r < 0.5 {
                192_000
            } else if r < 1.0 {
                64_000
            } else {
                16_000
            };
            (Nonlinearity::inverse_sine_u(r).unwrap(), steps, "inverse_sine_u")
        };
        let zs = nl.zeros(n + 1).unwrap();
        let (lo, hi) = zs.window(n).unwrap();
        let nu = lo + frac * (hi - lo);
        draws.push(Case {
            label: format!("{name} r={r:.4} n={n} nu={nu:.6} L={length:.4}"),
            nl,
            nu,
            length,
            steps,
        });
    }
    let cases: Vec<CaseReport> = draws
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let tm = lambda_of_nu_tol(&c.nl, c.length, c.nu, 1e-9).unwrap();
            let sh = shooting_lambda(&c.nl, c.length, c.nu, c.steps).unwrap();
            let rel = (tm - sh.lambda).abs() / tm;
            case(format!("oracle_{i:02}"), c.label.clone(), rel, 1e-6, rel <= 1e-6)
        })
        .collect();
    VerificationReport::new("oracle", cfg, cases)
}
