//! Singular-endpoint quadrature `f̂(ν) = ∫_0^ν ds/√(F(ν)-F(s))`, the
//! normalized window averages `h_n` with their infima, and the oscillatory
//! integral bound machinery.

mod gap;
mod gk;
mod oscint;

pub use gk::integrate;
pub use oscint::{alternating_term, oscillatory_integral};

pub(crate) use gap::{integral_of_f, GapEvaluator};

use crate::error::{Error, Result};
use crate::nonlinearity::{FamilyKind, Nonlinearity};
use crate::scalar::{as_f64, real, Real};
use crate::search::golden_min;

/// Value of a quadrature together with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<F> {
    pub value: F,
    pub abs_error_estimate: F,
    pub evaluations: usize,
}

/// Default relative tolerance used when an operation does not expose one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `f̂(ν) = ∫_0^ν ds / √(F(ν) - F(s))`.
///
/// The integrable endpoint singularity is removed by `s = ν - w²`; the
/// substituted integrand `2w/√(F(ν)-F(ν-w²))` extends continuously to
/// `w = 0` with value `2/√f(ν)` and is integrated adaptively to the given
/// relative tolerance.
///
/// Fails with [`Error::SingularAtPeak`] when `f(ν) = 0` and with
/// [`Error::NonpositiveGap`] when `f` vanishes identically on a left
/// neighborhood of `ν`.
pub fn fhat<F: Real>(nl: &Nonlinearity<F>, nu: F, tol: F) -> Result<QuadratureResult<F>> {
    if !(nu > F::zero()) || !nu.is_finite() {
        return Err(Error::InvalidParameter { what: format!("nu = {} must be positive", as_f64(nu)) });
    }
    if !(tol > F::zero()) {
        return Err(Error::InvalidParameter { what: "tol must be positive".into() });
    }
    let f_nu = nl.f_raw(nu);
    if !(f_nu > F::zero()) {
        return Err(Error::SingularAtPeak { nu: as_f64(nu) });
    }

    let ge = GapEvaluator::new(nl, nu)?;
    for k in 1..=6 {
        let s = nu * (F::one() - real::<F>(10f64.powi(-k)));
        if s < nu && !(ge.gap(s) > F::zero()) {
            return Err(Error::NonpositiveGap { s: as_f64(s) });
        }
    }
    if !(ge.gap(F::zero()) > F::zero()) {
        return Err(Error::NonpositiveGap { s: 0.0 });
    }

    let w_max = nu.sqrt();
    let two = real::<F>(2.0);
    let limit_at_peak = two / f_nu.sqrt();
    let integrand = |w: F| {
        let d = w * w;
        if d <= F::zero() {
            return limit_at_peak;
        }
        let g = ge.gap_near_peak(d);
        if !(g > F::zero()) {
            return F::infinity();
        }
        two * w / g.sqrt()
    };

    let mut evals = 0usize;
    let mut res = gk::integrate_counted(&integrand, F::zero(), w_max, tol, &mut evals)?;
    res.evaluations = evals + ge.evaluations();
    Ok(res)
}

/// Which oscillatory comparison family a window analysis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowFamily {
    /// `t^r (1 + sin t)`: windows march to infinity.
    Divergent,
    /// `t^r (1 + sin(1/t))`: windows shrink to zero.
    Vanishing,
}

fn comparison_nonlinearity<F: Real>(nl: &Nonlinearity<F>) -> Result<(Nonlinearity<F>, WindowFamily)> {
    let r = nl.r_exponent().ok_or_else(|| Error::InvalidParameter {
        what: "window averages need an oscillatory family".into(),
    })?;
    match nl.kind() {
        FamilyKind::SineU => Ok((Nonlinearity::sine_u(r)?, WindowFamily::Divergent)),
        FamilyKind::InverseSineU => Ok((Nonlinearity::inverse_sine_u(r)?, WindowFamily::Vanishing)),
        other => Err(Error::InvalidParameter {
            what: format!("window averages are defined for the sine_u / inverse_sine_u families, not {}", other.as_str()),
        }),
    }
}

/// Normalized window average
/// `h_n(s) = (∫_s^{ν_n} f₂) / (2 ν_n^r (ν_n - s))`
/// of the γ-normalized comparison function `f₂(t) = t^r(1+sin t)` or
/// `t^r(1+sin(1/t))`. Independent of the multiplier `g`.
pub fn hn<F: Real>(nl: &Nonlinearity<F>, n: u32, s: F) -> Result<F> {
    let (f2, _) = comparison_nonlinearity(nl)?;
    let nu = f2.zeros(n)?.peak(n).unwrap();
    if s < F::zero() {
        return Err(Error::NegativeArgument { t: as_f64(s) });
    }
    if s >= nu {
        return Err(Error::SampleAbovePeak { s: as_f64(s), nu: as_f64(nu) });
    }
    let ge = GapEvaluator::new(&f2, nu)?;
    Ok(hn_value(&f2, &ge, nu, s))
}

fn hn_value<F: Real>(f2: &Nonlinearity<F>, ge: &GapEvaluator<'_, F>, nu: F, s: F) -> F {
    let r = f2.r_exponent().unwrap();
    let two = real::<F>(2.0);
    let d = nu - s;
    ge.gap_near_peak(d) / (two * nu.powf(r) * d)
}

/// Infimum study of one window average `h_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HnAnalysis<F> {
    pub n: u32,
    /// Width parameter of the near-peak window the grid densifies into:
    /// `r + 1 + ε` for the divergent family, `2(π+2)(r + 1 + ε)` (scaled by
    /// `ν_n²`) for the vanishing one, with `ε = 0.1`.
    pub c_r: F,
    pub inf_value: F,
    pub argmin: F,
    /// `lim_{s→ν_n} h_n(s)`, probed just below the peak; equals 1.
    pub boundary_limit: F,
}

/// Grid-plus-refinement infimum of `h_n` over `[0, ν_n)`.
///
/// Half the grid is uniform on `[0, ν_n - cut]`; the other half densifies
/// geometrically inside the near-peak window of width `cut`, where all the
/// delicate behavior lives. The three smallest samples are refined by
/// golden section.
pub fn hn_infimum<F: Real>(nl: &Nonlinearity<F>, n: u32, grid: usize) -> Result<HnAnalysis<F>> {
    if grid < 1000 {
        return Err(Error::InvalidParameter { what: format!("grid must be >= 1000, got {grid}") });
    }
    let (f2, family) = comparison_nonlinearity(nl)?;
    let r = f2.r_exponent().unwrap();
    let nu = f2.zeros(n)?.peak(n).unwrap();
    let ge = GapEvaluator::new(&f2, nu)?;
    let h = |s: F| hn_value(&f2, &ge, nu, s);

    let eps = real::<F>(0.1);
    let two = real::<F>(2.0);
    let half = real::<F>(0.5);
    let (c_r, cut) = match family {
        WindowFamily::Divergent => {
            let c = r + F::one() + eps;
            (c, c.min(nu * half))
        }
        WindowFamily::Vanishing => {
            let c = two * (F::PI() + two) * (r + F::one() + eps);
            (c, (c * nu * nu).min(nu * half))
        }
    };

    let n_uniform = grid / 2;
    let n_dense = grid - n_uniform;
    let mut samples: Vec<(F, F)> = Vec::with_capacity(grid);
    let bulk_end = nu - cut;
    for i in 0..n_uniform {
        let s = bulk_end * real::<F>(i as f64 / n_uniform as f64);
        samples.push((s, h(s)));
    }
    // geometric densification of the distance to the peak
    let d_hi = cut;
    let d_lo = cut * real::<F>(1e-6);
    for i in 0..n_dense {
        let frac = real::<F>(i as f64 / (n_dense - 1) as f64);
        let d = d_hi * (d_lo / d_hi).powf(frac);
        samples.push((nu - d, h(nu - d)));
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples[i].1.partial_cmp(&samples[j].1).unwrap());

    let mut best = (samples[order[0]].0, samples[order[0]].1);
    for &idx in order.iter().take(3) {
        let lo = if idx == 0 { F::zero() } else { samples[idx - 1].0 };
        let hi = if idx + 1 == samples.len() { nu * (F::one() - real(1e-12)) } else { samples[idx + 1].0 };
        let (x, v) = golden_min(h, lo, hi, 48);
        if v < best.1 {
            best = (x, v);
        }
    }

    let probe = match family {
        WindowFamily::Divergent => nu * real::<F>(1e-9),
        WindowFamily::Vanishing => nu * nu * real::<F>(1e-6),
    };
    let boundary_limit = h(nu - probe);

    Ok(HnAnalysis { n, c_r, inf_value: best.1, argmin: best.0, boundary_limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn fhat_constant_closed_form() {
        // ∫_0^ν ds/√(ν-s) = 2√ν
        let nl = Nonlinearity::<f64>::constant(1.0).unwrap();
        for &nu in &[0.5f64, 1.0, 4.0, 9.0] {
            let r = fhat(&nl, nu, 1e-12).unwrap();
            assert_relative_eq!(r.value, 2.0 * nu.sqrt(), max_relative = 1e-11);
            assert!(r.abs_error_estimate <= 1e-10 * r.value.abs() + 1e-14);
        }
        let r4 = fhat(&nl, 4.0, 1e-12).unwrap();
        assert_relative_eq!(r4.value, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn fhat_linear_is_arcsine_constant() {
        // f(s) = s: f̂(ν) = √2 ∫_0^ν ds/√(ν²-s²) = π/√2, independent of ν
        let nl = Nonlinearity::linear(1.0).unwrap();
        let expect = PI / 2f64.sqrt();
        for &nu in &[0.1, 1.0, 10.0, 100.0] {
            let r = fhat(&nl, nu, 1e-12).unwrap();
            assert_relative_eq!(r.value, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn fhat_rejects_peak_zero() {
        let nl = Nonlinearity::sine_u(0.0).unwrap();
        assert!(matches!(fhat(&nl, 1.5 * PI, 1e-10), Err(Error::SingularAtPeak { .. })));
    }

    #[test]
    fn fhat_refinement_is_consistent() {
        // halving the tolerance moves the value by at most both error bounds
        let nl = Nonlinearity::sine_u(0.5).unwrap();
        let nu = 2.5 * PI;
        let mut tol = 1e-6;
        let mut prev = fhat(&nl, nu, tol).unwrap();
        for _ in 0..6 {
            tol *= 0.5;
            let next = fhat(&nl, nu, tol).unwrap();
            assert!(
                (next.value - prev.value).abs() <= prev.abs_error_estimate + next.abs_error_estimate,
                "tol = {tol}"
            );
            prev = next;
        }
    }

    #[test]
    fn hn_at_zero_first_window() {
        // r = 0, n = 1: h_1(0) = (ν₁ + 1)/(2ν₁) using cos ν₁ = 0
        let nl = Nonlinearity::sine_u(0.0).unwrap();
        let nu1 = 2.5 * PI;
        let expect = (nu1 + 1.0) / (2.0 * nu1);
        let got = hn(&nl, 1, 0.0).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-10);
        assert_relative_eq!(got, 0.5636619772367581, max_relative = 1e-10);
    }

    #[test]
    fn hn_boundary_limits_are_one() {
        for nl in [Nonlinearity::<f64>::sine_u(0.0).unwrap(), Nonlinearity::sine_u(1.5).unwrap()] {
            for n in [1, 7, 40] {
                let nu = nl.zeros(n).unwrap().peak(n).unwrap();
                let h = hn(&nl, n, nu * (1.0 - 1e-9)).unwrap();
                assert!((h - 1.0).abs() < 1e-6, "h = {h}");
            }
        }
        let r_fam = Nonlinearity::<f64>::inverse_sine_u(1.0).unwrap();
        for n in [1, 10, 60] {
            let nu = r_fam.zeros(n).unwrap().peak(n).unwrap();
            let h = hn(&r_fam, n, nu * (1.0 - 1e-8)).unwrap();
            assert!((h - 1.0).abs() < 1e-4, "n = {n}, h = {h}");
        }
    }

    #[test]
    fn hn_rejects_samples_at_or_above_peak() {
        let nl = Nonlinearity::sine_u(0.0).unwrap();
        let nu = 2.5 * PI;
        assert!(matches!(hn(&nl, 1, nu), Err(Error::SampleAbovePeak { .. })));
    }

    #[test]
    fn hn_infimum_first_window_r0() {
        // for r = 0, n = 1 the minimum sits near s = π where cos is most
        // negative: h = 1/2 + cos(s)/(2(ν-s)) ≈ 0.5 - 1/(2(ν₁-π))
        let nl = Nonlinearity::sine_u(0.0).unwrap();
        let a = hn_infimum(&nl, 1, 2000).unwrap();
        assert!(a.inf_value > 0.0);
        let approx_min = 0.5 - 1.0 / (2.0 * (2.5 * PI - PI));
        assert!((a.inf_value - approx_min).abs() < 0.02, "inf = {}", a.inf_value);
        assert!((a.boundary_limit - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oscillatory_bound_grid() {
        for &r in &[-1.0f64, 0.0, 1.0, 3.0] {
            // the series terms decay like k^{-(r+2)}, so the affordable
            // absolute tolerance tracks the regime
            let rel = if r < 0.0 { 1e-3 } else { 1e-6 };
            for &nu in &[1e-3f64, 1e-2, 0.1, 1.0, 10.0] {
                let scale = (PI + 2.0) * nu.powf(r + 2.0);
                let q = oscillatory_integral(r, nu, rel * scale).unwrap();
                assert!(
                    q.value.abs() <= scale * (1.0 + 1e-9) + q.abs_error_estimate,
                    "r = {r}, nu = {nu}: {} vs {}",
                    q.value.abs(),
                    scale
                );
            }
        }
    }
}
