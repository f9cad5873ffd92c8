#![allow(dead_code)]

//! Shared helpers for the integration suites.

use oscbif_core::nonlinearity::Nonlinearity;
use rand::Rng;

/// A randomly drawn admissible time-map case: oscillatory family, exponent,
/// peak strictly inside one of the first windows, interval length.
pub struct OracleCase {
    pub label: String,
    pub nl: Nonlinearity<f64>,
    pub nu: f64,
    pub length: f64,
    pub steps: usize,
}

/// Draws `count` cases across both oscillatory families with `r ∈ [0, 3]`,
/// peaks placed in the middle 60% of windows 1..4 (so `f(ν)` stays away
/// from zero), and `L ∈ [0.7, 1.5]`.
pub fn sample_oracle_cases(rng: &mut impl Rng, count: usize) -> Vec<OracleCase> {
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let divergent = rng.gen_bool(0.5);
        let r: f64 = rng.gen_range(0.0..=3.0);
        let n: u32 = rng.gen_range(1..=4);
        let frac: f64 = rng.gen_range(0.2..=0.8);
        let length: f64 = rng.gen_range(0.7..=1.5);
        let (nl, steps, name) = if divergent {
            (Nonlinearity::sine_u(r).unwrap(), 6_000, "sine_u")
        } else {
            // the vanishing-oscillation family needs finer steps the slower
            // f decays at zero: for small r the forcing stays O(1) while its
            // oscillation period shrinks like u²
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
        cases.push(OracleCase {
            label: format!("case {i}: {name} r={r:.3} n={n} nu={nu:.6} L={length:.3}"),
            nl,
            nu,
            length,
            steps,
        });
    }
    cases
}
