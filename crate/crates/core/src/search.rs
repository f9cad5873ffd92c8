//! One-dimensional search primitives: golden-section minimization and
//! bisection root finding on smooth curves.

use crate::scalar::{real, Real};

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)` after `max_iters` shrink steps (each step
/// multiplies the bracket by ~0.618, so 40 steps resolve ~1e-8 of the
/// initial width).
pub(crate) fn golden_min<F: Real>(
    f: impl Fn(F) -> F,
    mut a: F,
    mut b: F,
    max_iters: usize,
) -> (F, F) {
    let resp = real::<F>(2.0 - 1.618_033_988_749_895);

    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..max_iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            f2 = f(x2);
        }
        if b - a <= F::epsilon() * (a.abs() + b.abs()) {
            break;
        }
    }

    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisection for a root of `f` on a bracket `[a, b]` with `f(a)` and `f(b)`
/// of opposite sign. Runs until the bracket is below `rel_tol` relative to
/// its midpoint (or machine-tight).
pub(crate) fn bisect_root<F: Real>(f: impl Fn(F) -> F, mut a: F, mut b: F, rel_tol: F) -> F {
    let mut fa = f(a);
    if fa == F::zero() {
        return a;
    }
    let fb = f(b);
    if fb == F::zero() {
        return b;
    }
    debug_assert!(fa * fb < F::zero(), "bisect_root needs a sign change");

    for _ in 0..200 {
        let mid = (a + b) * real(0.5);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == F::zero() {
            return mid;
        }
        if (fm > F::zero()) == (fa > F::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()) * real(0.5) {
            break;
        }
    }
    (a + b) * real(0.5)
}

/// Least-squares line through `(x_i, y_i)`.
///
/// Returns `(slope, intercept, slope_stderr)`; the standard error is zero
/// when there are two points or the fit is exact.
pub(crate) fn linear_fit<F: Real>(xs: &[F], ys: &[F]) -> (F, F, F) {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let m = real::<F>(xs.len() as f64);
    let mut sx = F::zero();
    let mut sy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sx += x;
        sy += y;
    }
    let mx = sx / m;
    let my = sy / m;

    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    if xs.len() == 2 {
        return (slope, intercept, F::zero());
    }
    let mut ss_res = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    let dof = real::<F>((xs.len() - 2) as f64);
    let stderr = (ss_res / dof / sxx).max(F::zero()).sqrt();
    (slope, intercept, stderr)
}
