//! Family-aware evaluation of the gap `F(ν) - F(s) = ∫_s^ν f`.
//!
//! The endpoint quadrature queries this gap at thousands of scattered
//! points, so each evaluator precomputes a panel decomposition of `[0, ν]`
//! once and answers point queries with one partial Gauss–Kronrod panel:
//!
//! * divergent oscillation (`sin t`): panels of width `π/2` in `t`, suffix
//!   sums toward `ν`;
//! * vanishing oscillation (`sin(1/(t - shift))`): panels of width `π/2` in
//!   `σ = 1/(t - shift)` up to a cut `Σ*`, beyond which the remaining
//!   integral is closed out by the asymptotic tail `I_p` (and, for a
//!   positive shift, a binomial expansion of `(shift + 1/σ)^r`);
//! * everything else: closed-form or knot-exact integrals.
//!
//! Near `s → ν` the gap is always a single short panel integral of a smooth
//! integrand, so it stays accurate exactly where the time map is most
//! sensitive.

use core::cell::Cell;

use crate::error::{Error, Result};
use crate::nonlinearity::{GSpec, Nonlinearity, OscShape};
use crate::scalar::{as_f64, real, Real};

use super::gk::{gk15, gk15_span};
use super::oscint::sin_tail_asymptotic;

pub(crate) struct GapEvaluator<'a, F: Real> {
    nl: &'a Nonlinearity<F>,
    upper: F,
    layout: Layout<F>,
    evals: Cell<usize>,
}

enum Layout<F> {
    Closed,
    SinePanels {
        breaks: Vec<F>,
        /// `suffix[j] = ∫_{breaks[j]}^{upper} f`
        suffix: Vec<F>,
    },
    InvPanels {
        shift: F,
        gamma: F,
        r: F,
        /// ascending σ grid from `1/(upper - shift)` to the cut
        sigma_breaks: Vec<F>,
        /// `prefix[j] = ∫_{σ_0}^{σ_j} G`, i.e. `∫_{t(σ_j)}^{upper} f`
        prefix: Vec<F>,
        /// `∫_{Σ*}^{∞} G`, i.e. `∫_{shift}^{t(Σ*)} f`
        closure_at_cut: F,
    },
}

impl<'a, F: Real> GapEvaluator<'a, F> {
    pub(crate) fn new(nl: &'a Nonlinearity<F>, upper: F) -> Result<Self> {
        let mut evals = 0usize;
        let layout = match nl.osc_shape() {
            OscShape::None => Layout::Closed,
            OscShape::SineArg => {
                let step = F::FRAC_PI_2();
                let mut breaks = Vec::new();
                let mut b = F::zero();
                breaks.push(b);
                // geometric refinement toward t = 0, where t^r has an
                // algebraic kink: each panel [a, 4a] rescales to a fixed
                // smooth integrand, keeping full relative accuracy
                let first = step.min(upper);
                for k in (0..16).rev() {
                    let t = first * real::<F>(0.25f64.powi(k + 1));
                    if t > b && t < upper {
                        breaks.push(t);
                        b = t;
                    }
                }
                // include multiplier knots so panels never straddle a
                // curvature jump of the interpolated g
                let mut knots: Vec<F> = match nl.g_spec() {
                    GSpec::Table { table, .. } => table
                        .knots()
                        .map(|(x, _)| x)
                        .filter(|&x| x > F::zero() && x < upper)
                        .collect(),
                    GSpec::Const(_) => Vec::new(),
                };
                knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut knot_iter = knots.into_iter().peekable();
                while b < upper {
                    let mut next = (b + step).min(upper);
                    while let Some(&k) = knot_iter.peek() {
                        if k <= b {
                            knot_iter.next();
                        } else {
                            if k < next {
                                next = k;
                            }
                            break;
                        }
                    }
                    breaks.push(next);
                    b = next;
                }
                let m = breaks.len();
                let mut suffix = vec![F::zero(); m];
                for j in (0..m - 1).rev() {
                    let (v, _, _) = gk15(&|t| nl.f_raw(t), breaks[j], breaks[j + 1]);
                    evals += 15;
                    suffix[j] = suffix[j + 1] + v;
                }
                Layout::SinePanels { breaks, suffix }
            }
            OscShape::InverseArg { shift } => {
                let gamma = nl.g_const().ok_or_else(|| Error::InvalidParameter {
                    what: "vanishing-oscillation families need a constant multiplier".into(),
                })?;
                let r = nl.r_exponent().expect("oscillatory family has an exponent");
                if upper <= shift {
                    return Err(Error::NonpositiveGap { s: as_f64(shift) });
                }
                let sigma_lo = (upper - shift).recip();
                let mut cut = real::<F>(50.0).max(sigma_lo);
                if shift > F::zero() {
                    cut = cut.max(real::<F>(4.0) / shift);
                }
                let step = F::FRAC_PI_2();
                let mut sigma_breaks = vec![sigma_lo];
                let mut s = sigma_lo;
                while s < cut {
                    let next = (s + step).min(cut);
                    sigma_breaks.push(next);
                    s = next;
                }
                let cut = *sigma_breaks.last().unwrap();
                let m = sigma_breaks.len();
                let mut prefix = vec![F::zero(); m];
                for j in 1..m {
                    let (v, _, _) = gk15(
                        &|sg| inv_sigma_integrand(sg, shift, gamma, r),
                        sigma_breaks[j - 1],
                        sigma_breaks[j],
                    );
                    evals += 15;
                    prefix[j] = prefix[j - 1] + v;
                }
                let closure_at_cut = inverse_closure(r, shift, gamma, cut);
                Layout::InvPanels { shift, gamma, r, sigma_breaks, prefix, closure_at_cut }
            }
        };
        Ok(Self { nl, upper, layout, evals: Cell::new(evals) })
    }

    pub(crate) fn evaluations(&self) -> usize {
        self.evals.get()
    }

    fn bump(&self, n: usize) {
        self.evals.set(self.evals.get() + n);
    }

    /// `∫_{upper-d}^{upper} f` for a small distance `d` below the peak,
    /// integrated width-exactly (the width is taken from `d` itself, never
    /// re-derived from rounded endpoints) so the gap keeps full relative
    /// accuracy as `d → 0`. Falls back to [`gap`](Self::gap) when `d` is
    /// too wide for a single smooth panel.
    pub(crate) fn gap_near_peak(&self, d: F) -> F {
        if !(d > F::zero()) {
            return F::zero();
        }
        let quarter_pi = F::FRAC_PI_4();
        let threshold = match &self.layout {
            Layout::Closed => self.upper * real(0.25),
            Layout::SinePanels { .. } => quarter_pi.min(self.upper * real(0.25)),
            Layout::InvPanels { shift, .. } => {
                let u = self.upper - *shift;
                (quarter_pi * u * u).min(u * real(0.5))
            }
        };
        if d > threshold {
            return self.gap(self.upper - d);
        }
        let (v, _, _) = gk15_span(&|t| self.nl.f_raw(t), self.upper, d);
        self.bump(15);
        v
    }

    /// `∫_s^upper f`, clamping `s` into `[0, upper]`.
    pub(crate) fn gap(&self, s: F) -> F {
        let s = s.max(F::zero());
        if s >= self.upper {
            return F::zero();
        }
        match &self.layout {
            Layout::Closed => self
                .nl
                .closed_integral(s, self.upper)
                .expect("closed layout implies closed-form integral"),
            Layout::SinePanels { breaks, suffix } => {
                let j = upper_bound(breaks, s);
                // breaks[j] <= s < breaks[j+1]
                let mut total = suffix[j + 1];
                if s < breaks[j + 1] {
                    let (v, _, _) = gk15(&|t| self.nl.f_raw(t), s, breaks[j + 1]);
                    self.bump(15);
                    total += v;
                }
                total
            }
            Layout::InvPanels { shift, gamma, r, sigma_breaks, prefix, closure_at_cut } => {
                let full = *prefix.last().unwrap() + *closure_at_cut;
                if s <= *shift {
                    return full;
                }
                let sigma_s = (s - *shift).recip();
                if !sigma_s.is_finite() {
                    return full;
                }
                let cut = *sigma_breaks.last().unwrap();
                let sigma_lo = sigma_breaks[0];
                if sigma_s <= cut {
                    let j = upper_bound(sigma_breaks, sigma_s);
                    let mut total = prefix[j];
                    if sigma_s > sigma_breaks[j] {
                        let (v, _, _) = gk15(
                            &|sg| inv_sigma_integrand(sg, *shift, *gamma, *r),
                            sigma_breaks[j],
                            sigma_s,
                        );
                        self.bump(15);
                        total += v;
                    }
                    total
                } else if sigma_s - sigma_lo <= real::<F>(8.0) * F::PI() {
                    // short window entirely in σ space: integrate directly to
                    // avoid cancelling two nearby closures
                    let mut total = F::zero();
                    let step = F::FRAC_PI_2();
                    let mut lo = sigma_lo;
                    while lo < sigma_s {
                        let hi = (lo + step).min(sigma_s);
                        let (v, _, _) =
                            gk15(&|sg| inv_sigma_integrand(sg, *shift, *gamma, *r), lo, hi);
                        self.bump(15);
                        total += v;
                        lo = hi;
                    }
                    total
                } else {
                    full - inverse_closure(*r, *shift, *gamma, sigma_s)
                }
            }
        }
    }
}

/// `G(σ) = γ (shift + 1/σ)^r (1 + sin σ) / σ²`, the transformed integrand of
/// `∫ f dt` under `σ = 1/(t - shift)`.
fn inv_sigma_integrand<F: Real>(sigma: F, shift: F, gamma: F, r: F) -> F {
    let u = sigma.recip();
    gamma * (shift + u).powf(r) * (F::one() + sigma.sin()) / (sigma * sigma)
}

/// `∫_σ^∞ G = ∫_{shift}^{shift + 1/σ} f` for `σ` beyond the panel cut.
fn inverse_closure<F: Real>(r: F, shift: F, gamma: F, sigma: F) -> F {
    let u = sigma.recip();
    let p1 = r + F::one();
    let power_part = if shift > F::zero() {
        // ((shift+u)^{r+1} - shift^{r+1}) / (r+1), cancellation-free
        shift.powf(p1) * (p1 * (u / shift).ln_1p()).exp_m1() / p1
    } else {
        u.powf(p1) / p1
    };

    let osc_part = if shift > F::zero() {
        // (shift + 1/σ)^r = Σ_k C(r,k) shift^{r-k} σ^{-k}; σ·shift >= 4 by
        // the cut choice, so the series is geometric
        let mut acc = F::zero();
        let mut coef = shift.powf(r);
        let mut k = 0u32;
        loop {
            let p = real::<F>(k as f64) + real(2.0);
            let (tail, _) = sin_tail_asymptotic(p, sigma);
            let term = coef * tail;
            acc += term;
            if term.abs() <= acc.abs() * F::epsilon() || k >= 60 {
                break;
            }
            let kf = real::<F>(k as f64);
            coef = coef * (r - kf) / ((kf + F::one()) * shift);
            k += 1;
        }
        acc
    } else {
        sin_tail_asymptotic(r + real(2.0), sigma).0
    };

    gamma * (power_part + osc_part)
}

/// Largest index `j` with `xs[j] <= v` (xs ascending, `v < xs.last()`),
/// clamped so `j + 1` is a valid index.
fn upper_bound<F: Real>(xs: &[F], v: F) -> usize {
    match xs.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
        Ok(j) => j.min(xs.len() - 2),
        Err(j) => j.saturating_sub(1).min(xs.len() - 2),
    }
}

/// `∫_a^b f` for `0 <= a <= b`, dispatching to closed forms or the panel
/// machinery as appropriate.
pub(crate) fn integral_of_f<F: Real>(nl: &Nonlinearity<F>, a: F, b: F) -> F {
    debug_assert!(F::zero() <= a && a <= b);
    if a >= b {
        return F::zero();
    }
    if let Some(v) = nl.closed_integral(a, b) {
        return v;
    }
    match GapEvaluator::new(nl, b) {
        Ok(ge) => ge.gap(a),
        Err(_) => F::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn sine_panels_match_adaptive_quadrature() {
        let nl = Nonlinearity::sine_u(0.7).unwrap();
        let upper = 25.0;
        let ge = GapEvaluator::new(&nl, upper).unwrap();
        for &s in &[0.0, 0.3, 5.0, 12.7, 24.9, 24.999999] {
            let direct = integrate(|t: f64| nl.f_raw(t), s, upper, 1e-13).unwrap();
            assert_relative_eq!(ge.gap(s), direct.value, max_relative = 1e-11);
        }
    }

    #[test]
    fn inverse_panels_match_oscillatory_reference() {
        // ∫_s^ν t^r (1+sin(1/t)) dt = power part + alternating-series part
        let r = 1.0f64;
        let nl = Nonlinearity::inverse_sine_u(r).unwrap();
        let nu = 0.12;
        let ge = GapEvaluator::new(&nl, nu).unwrap();
        for &s in &[0.0f64, 1e-6, 0.01, 0.05, 0.119, 0.1199999] {
            let power = (nu.powf(r + 1.0) - s.powf(r + 1.0)) / (r + 1.0);
            let osc_nu = crate::quadrature::oscillatory_integral(r, nu, 1e-14).unwrap();
            let osc_s = if s > 0.0 {
                crate::quadrature::oscillatory_integral(r, s, 1e-15).unwrap().value
            } else {
                0.0
            };
            let reference = power + osc_nu.value - osc_s;
            let got = ge.gap(s);
            assert!(
                (got - reference).abs() <= 1e-12 + 1e-9 * reference.abs(),
                "s = {s}: got {got}, reference {reference}"
            );
        }
    }

    #[test]
    fn shifted_family_gap_is_flat_below_alpha() {
        let nl = Nonlinearity::<f64>::shifted_inverse_sine(0.0, 1.0).unwrap();
        let nu = 1.1;
        let ge = GapEvaluator::new(&nl, nu).unwrap();
        let g0 = ge.gap(0.0);
        let g1 = ge.gap(0.5);
        let g2 = ge.gap(1.0);
        assert_relative_eq!(g0, g1, max_relative = 1e-14);
        assert_relative_eq!(g0, g2, max_relative = 1e-14);
        assert!(g0 > 0.0);
        // and matches brute quadrature above alpha
        let direct = integrate(|t: f64| nl.f_raw(t), 1.02, nu, 1e-12).unwrap();
        assert_relative_eq!(ge.gap(1.02), direct.value, max_relative = 1e-9);
    }

    #[test]
    fn gap_near_peak_is_first_order_accurate() {
        let nl = Nonlinearity::sine_u(1.0).unwrap();
        let nu = 2.5 * PI;
        let f_nu = nl.f_raw(nu);
        let ge = GapEvaluator::new(&nl, nu).unwrap();
        for &d in &[1e-4, 1e-6, 1e-8] {
            let g = ge.gap(nu - d);
            assert_relative_eq!(g, f_nu * d, max_relative = 1e-3 * d.sqrt().max(1e-7));
        }
    }

    #[test]
    fn user_table_gap_is_knot_exact() {
        let pts: Vec<(f64, f64)> = (0..=20).map(|i| (i as f64 * 0.5, 1.0 + (i as f64 * 0.5).sin().abs())).collect();
        let nl = Nonlinearity::user_table(&pts).unwrap();
        let ge = GapEvaluator::new(&nl, 10.0).unwrap();
        let direct = integrate(|t: f64| nl.f_raw(t), 1.3, 10.0, 1e-13).unwrap();
        assert_relative_eq!(ge.gap(1.3), direct.value, max_relative = 1e-10);
    }
}
