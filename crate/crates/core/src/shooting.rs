//! Reference shooting solver for the symmetric two-point problem, used as
//! an independent check of the time-map engine.
//!
//! For a prescribed peak `ν` the solver integrates the initial value
//! problem `u'' = -λ f(u)`, `u(0) = ν`, `u'(0) = 0` over half the interval
//! with classical fourth-order Runge–Kutta and bisects on `λ` until the
//! trajectory lands on `u(L/2) = 0`. It never touches the quadrature path.

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::scalar::{as_f64, real, Real};

/// Outcome of the λ-bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult<F> {
    pub lambda: F,
    /// Value of `u` at the far end for the final λ (should be ~0).
    pub endpoint_residual: F,
    pub bisections: usize,
}

/// RK4 integration of `u'' = -λ f(u)` from `(ν, 0)` over `[0, half_len]`;
/// returns `u(half_len)`. `f` is extended constantly below zero so
/// overshooting trajectories stay well defined.
fn shoot<F: Real>(nl: &Nonlinearity<F>, half_len: F, nu: F, lambda: F, steps: usize) -> F {
    let h = half_len / real::<F>(steps as f64);
    let half = real::<F>(0.5);
    let sixth = real::<F>(1.0 / 6.0);
    let two = real::<F>(2.0);

    let accel = |u: F| -lambda * nl.f_extended(u);

    let mut u = nu;
    let mut p = F::zero();
    for _ in 0..steps {
        let k1u = p;
        let k1p = accel(u);
        let k2u = p + half * h * k1p;
        let k2p = accel(u + half * h * k1u);
        let k3u = p + half * h * k2p;
        let k3p = accel(u + half * h * k2u);
        let k4u = p + h * k3p;
        let k4p = accel(u + h * k3u);
        u += h * sixth * (k1u + two * k2u + two * k3u + k4u);
        p += h * sixth * (k1p + two * k2p + two * k3p + k4p);
    }
    u
}

/// Finds the λ for which the symmetric profile with peak `ν` solves the
/// Dirichlet problem on `(0, L)`, by bisection on the shooting map.
pub fn shooting_lambda<F: Real>(
    nl: &Nonlinearity<F>,
    length: F,
    nu: F,
    steps: usize,
) -> Result<ShootingResult<F>> {
    if !(length > F::zero()) || !(nu > F::zero()) {
        return Err(Error::InvalidParameter { what: "length and nu must be positive".into() });
    }
    let half_len = length * real(0.5);
    let end = |lambda: F| shoot(nl, half_len, nu, lambda, steps);

    // u(L/2) decreases in λ; bracket by doubling
    let mut hi = F::one();
    let mut grow = 0;
    while end(hi) > F::zero() {
        hi *= real(2.0);
        grow += 1;
        if grow > 200 {
            return Err(Error::InvalidParameter {
                what: format!("shooting could not bracket a root in lambda for nu = {}", as_f64(nu)),
            });
        }
    }
    let mut lo = F::zero();
    let mut bisections = 0usize;
    for _ in 0..120 {
        let mid = (lo + hi) * real(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if end(mid) > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        bisections += 1;
        if (hi - lo) <= real::<F>(1e-14) * hi {
            break;
        }
    }
    let lambda = (lo + hi) * real(0.5);
    Ok(ShootingResult { lambda, endpoint_residual: end(lambda), bisections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn linear_recovers_pi_squared() {
        let nl = Nonlinearity::linear(1.0).unwrap();
        let r = shooting_lambda(&nl, 1.0, 1.0, 4000).unwrap();
        assert_relative_eq!(r.lambda, PI * PI, max_relative = 1e-9);
    }

    #[test]
    fn constant_recovers_eight_nu() {
        let nl = Nonlinearity::constant(1.0).unwrap();
        let r = shooting_lambda(&nl, 1.0, 0.75, 4000).unwrap();
        assert_relative_eq!(r.lambda, 6.0, max_relative = 1e-9);
    }
}
