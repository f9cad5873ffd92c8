//! Integrals against `sin(1/t)`: the alternating-series evaluation of
//! `∫_0^ν t^r sin(1/t) dt` and the asymptotic tail
//! `I_p(A) = ∫_A^∞ sin(σ) σ^{-p} dσ` used by the vanishing-oscillation gap
//! tables.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};

use super::gk::{gk15, integrate_counted};
use super::QuadratureResult;

/// `I_p(A) = ∫_A^∞ sin(σ) σ^{-p} dσ` by repeated integration by parts:
///
/// `I_p = cos A / A^p + p sin A / A^{p+1} - p (p+1) I_{p+2}`.
///
/// The series is asymptotic; terms shrink while `(p + 2j)² < A²`, which for
/// `A >= 50` reaches machine precision. Returns `(value, error_bound)` where
/// the bound is the magnitude of the first omitted term.
pub(crate) fn sin_tail_asymptotic<F: Real>(p: F, a: F) -> (F, F) {
    debug_assert!(a > F::zero());
    let (sin_a, cos_a) = (a.sin(), a.cos());
    let mut acc = F::zero();
    let mut coef = F::one();
    let mut sign = F::one();
    let mut q = p;
    let mut prev_mag = F::infinity();

    for _ in 0..48 {
        let inv_q = a.powf(-q);
        let inv_q1 = inv_q / a;
        let term = sign * coef * (cos_a * inv_q + q * sin_a * inv_q1);
        let mag = coef * (inv_q + q * inv_q1);
        if mag >= prev_mag {
            // series started diverging; stop before this term
            return (acc, mag);
        }
        acc += term;
        if mag <= acc.abs() * F::epsilon() || mag < F::min_positive_value() {
            return (acc, mag);
        }
        prev_mag = mag;
        coef = coef * q * (q + F::one());
        sign = -sign;
        q += real(2.0);
    }
    (acc, prev_mag)
}

/// The k-th alternating-series term
/// `a_k = ∫_0^1 sin(πη) / (η + k)^{r+2} dη`.
pub fn alternating_term<F: Real>(r: F, k: u64) -> F {
    let p = r + real(2.0);
    let kf = real::<F>(k as f64);
    let pi = F::PI();
    let (v, _, _) = gk15(&|eta: F| (pi * eta).sin() * (eta + kf).powf(-p), F::zero(), F::one());
    v
}

/// `∫_0^ν t^r sin(1/t) dt` for `r > -2`, evaluated through the substitution
/// `σ = 1/t`: a head integral over `[1/ν, πN]` with `N = min{n : πn >= 1/ν}`
/// plus the alternating sum of one-period integrals, truncated when the next
/// term falls below `tol/2`. The reported error combines that rigorous
/// alternating-series remainder with the head quadrature estimate.
pub fn oscillatory_integral<F: Real>(r: F, nu: F, tol: F) -> Result<QuadratureResult<F>> {
    if !r.is_finite() || r <= real(-2.0) {
        return Err(Error::ExponentOutOfRange { r: as_f64(r), what: "oscillatory integral needs r > -2" });
    }
    if !(nu > F::zero()) || !nu.is_finite() {
        return Err(Error::InvalidParameter { what: format!("nu = {} must be positive", as_f64(nu)) });
    }
    if !(tol > F::zero()) {
        return Err(Error::InvalidParameter { what: "tol must be positive".into() });
    }

    let p = r + real(2.0);
    let pi = F::PI();
    let a = nu.recip();
    let mut evals = 0usize;

    // N = min{n : πn >= 1/ν}
    let n_start = {
        let raw = (a / pi).ceil();
        if raw < F::one() {
            1u64
        } else {
            raw.to_f64().unwrap_or(1.0) as u64
        }
    };

    let quarter = real::<F>(0.25);
    let head_end = pi * real::<F>(n_start as f64);
    let head = if head_end > a {
        integrate_counted(&|s: F| s.sin() * s.powf(-p), a, head_end, quarter * tol / head_scale(p, a), &mut evals)?
    } else {
        QuadratureResult { value: F::zero(), abs_error_estimate: F::zero(), evaluations: 0 }
    };

    // alternating one-period integrals in the normalized variable
    let prefactor = pi.powf(-(r + F::one()));
    let half_tol = tol * real(0.5);
    let mut sum = F::zero();
    let mut k = n_start;
    let mut tail_bound;
    const MAX_TERMS: u64 = 5_000_000;
    loop {
        let term = alternating_term(r, k);
        evals += 15;
        let signed = if k % 2 == 0 { term } else { -term };
        sum += signed;
        let next = alternating_term(r, k + 1);
        evals += 15;
        tail_bound = prefactor * next;
        if tail_bound < half_tol {
            break;
        }
        if k - n_start > MAX_TERMS {
            return Err(Error::ToleranceNotReached {
                requested: as_f64(tol),
                achieved: as_f64(tail_bound),
            });
        }
        k += 1;
    }

    Ok(QuadratureResult {
        value: head.value + prefactor * sum,
        abs_error_estimate: head.abs_error_estimate + tail_bound,
        evaluations: evals,
    })
}

/// Rough scale of the head integrand, so its relative tolerance request
/// translates into the caller's absolute budget.
fn head_scale<F: Real>(p: F, a: F) -> F {
    (a.powf(-p) * F::PI()).max(F::min_positive_value())
}
