//! Annulus reduction for dimensions `N >= 2` and the resulting upper-bound
//! sequence `λ̄_n`.
//!
//! On the annulus `A = {R/2 < |x - x₀| < R}` the substitution
//! `s = r^{2-N}/(N-2)` (or `s = ln r` for `N = 2`) turns the radial
//! Laplacian into a plain second derivative with weight `r^{2(N-1)}`.
//! Replacing the weight by its infimum `(R/2)^{2(N-1)}` leaves the
//! autonomous problem `-z'' = λ (R/2)^{2(N-1)} f₁(z)` on `(a, b)`, whose
//! time map gives a genuine subsolution of the full problem. Solvability at
//! peak `ν` therefore pins
//!
//! `λ̄(ν) = 2 f̂₁(ν)² / ((R/2)^{2(N-1)} (b-a)²)`,
//!
//! an upper bound for the minimal parameter of any window containing `ν`.

use crate::error::{Error, Result};
use crate::nonlinearity::{MonotoneCubic, Nonlinearity};
use crate::quadrature::{fhat, GapEvaluator, WindowFamily, DEFAULT_TOL};
use crate::scalar::{as_f64, real, Real};
use crate::timemap::{LambdaSequence, Method, SequenceEntry};

/// Geometry of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialConfig<F> {
    pub dim: u32,
    pub outer_radius: F,
    /// Transformed interval `(a, b)`, `b > a`.
    pub a: F,
    pub b: F,
}

impl<F: Real> RadialConfig<F> {
    pub fn new(dim: u32, outer_radius: F) -> Result<Self> {
        let (a, b) = reduced_interval(dim, outer_radius)?;
        Ok(Self { dim, outer_radius, a, b })
    }

    /// Infimum of the transformed weight `r^{2(N-1)}` on the annulus.
    pub fn weight_inf(&self) -> F {
        (self.outer_radius * real::<F>(0.5)).powi(2 * (self.dim as i32 - 1))
    }

    /// Radius corresponding to a transformed coordinate `s ∈ [a, b]`.
    pub fn radius_of(&self, s: F) -> F {
        if self.dim == 2 {
            s.exp()
        } else {
            let nm2 = real::<F>((self.dim - 2) as f64);
            (nm2 * s).powf(-(nm2.recip()))
        }
    }
}

/// `(a, b)` of the reduced interval: `a = 1/(R^{N-2}(N-2))`,
/// `b = 2^{N-2}/(R^{N-2}(N-2))` for `N >= 3`; `(ln(R/2), ln R)` for `N = 2`.
pub fn reduced_interval<F: Real>(dim: u32, outer_radius: F) -> Result<(F, F)> {
    if dim < 2 {
        return Err(Error::DimensionTooLow { n: dim });
    }
    if !(outer_radius > F::zero()) || !outer_radius.is_finite() {
        return Err(Error::InvalidParameter { what: "outer radius must be positive".into() });
    }
    let two = real::<F>(2.0);
    if dim == 2 {
        Ok(((outer_radius / two).ln(), outer_radius.ln()))
    } else {
        let nm2 = real::<F>((dim - 2) as f64);
        let denom = outer_radius.powi(dim as i32 - 2) * nm2;
        Ok((denom.recip(), two.powi(dim as i32 - 2) / denom))
    }
}

/// Time map of the reduced constant-coefficient problem: the λ solving
/// `-z'' = λ w f₁(z)` on an interval of length `len` with peak `ν`, i.e.
/// `λ = 2 f̂₁(ν)²/(w len²)`.
pub fn lambda_reduced<F: Real>(f1: &Nonlinearity<F>, nu: F, weight: F, len: F, tol: F) -> Result<F> {
    if !(weight > F::zero()) || !(len > F::zero()) {
        return Err(Error::InvalidParameter { what: "weight and interval length must be positive".into() });
    }
    let fh = fhat(f1, nu, tol)?;
    Ok(real::<F>(2.0) * fh.value * fh.value / (weight * len * len))
}

/// Upper bound `λ̄(ν)` from the annulus construction.
pub fn lambda_bar<F: Real>(f1: &Nonlinearity<F>, dim: u32, outer_radius: F, nu: F) -> Result<F> {
    let cfg = RadialConfig::new(dim, outer_radius)?;
    lambda_reduced(f1, nu, cfg.weight_inf(), cfg.b - cfg.a, real(DEFAULT_TOL))
}

/// The same bound through the closed-form solvability relation
/// `f̂₁(ν) = R √λ (2^{N-2} - 1)/2^{N-1/2}` (which drops the `1/(N-2)`
/// carried by the interval length, so it matches [`lambda_bar`] only at
/// `N = 3`). Exposed so the two routes can be compared; see
/// [`constant_route_ratio`].
pub fn lambda_bar_closed_form<F: Real>(f1: &Nonlinearity<F>, dim: u32, outer_radius: F, nu: F) -> Result<F> {
    if dim < 3 {
        return Err(Error::DimensionTooLow { n: dim });
    }
    let two = real::<F>(2.0);
    let fh = fhat(f1, nu, real(DEFAULT_TOL))?;
    let coef = (two.powi(dim as i32 - 2) - F::one()) / two.powf(real::<F>(dim as f64) - real(0.5));
    let sqrt_lambda = fh.value / (outer_radius * coef);
    Ok(sqrt_lambda * sqrt_lambda)
}

/// Ratio `lambda_bar / lambda_bar_closed_form = (N-2)²` between the
/// interval-length route and the closed-form constant route.
pub fn constant_route_ratio<F: Real>(dim: u32) -> Result<F> {
    if dim < 3 {
        return Err(Error::DimensionTooLow { n: dim });
    }
    let nm2 = real::<F>((dim - 2) as f64);
    Ok(nm2 * nm2)
}

/// `λ̄_n = λ̄(ν_n)` for `n = 1..n_max`, with `f₁ = γ · comparison family`.
/// Each entry bounds the corresponding exact `λ_n` from above.
pub fn lambda_upper_sequence<F: Real>(
    family: WindowFamily,
    r: F,
    gamma: F,
    dim: u32,
    outer_radius: F,
    n_max: u32,
) -> Result<LambdaSequence<F>> {
    if !(gamma > F::zero()) {
        return Err(Error::InvalidParameter { what: "gamma must be positive".into() });
    }
    let f1 = match family {
        WindowFamily::Divergent => Nonlinearity::sine_u(r)?.with_gamma(gamma)?,
        WindowFamily::Vanishing => Nonlinearity::inverse_sine_u(r)?.with_gamma(gamma)?,
    };
    let cfg = RadialConfig::new(dim, outer_radius)?;
    let weight = cfg.weight_inf();
    let len = cfg.b - cfg.a;
    let zs = f1.zeros(n_max)?;
    let mut seq = LambdaSequence::default();
    for n in 1..=n_max {
        let nu = zs.peak(n).unwrap();
        match lambda_reduced(&f1, nu, weight, len, real(DEFAULT_TOL)) {
            Ok(l) => {
                seq.entries.insert(n, SequenceEntry { lambda: l, nu_at_min: nu, method: Method::RadialUpperBound });
            }
            Err(e) => {
                seq.failures.insert(n, e.to_string());
            }
        }
    }
    Ok(seq)
}

/// Reduced-coordinate profile `z(s)` on a uniform grid over `[a, b]`
/// (peak `ν` at the midpoint), reconstructed by inverse quadrature of the
/// reduced time map.
pub fn reduced_profile<F: Real>(
    f1: &Nonlinearity<F>,
    dim: u32,
    outer_radius: F,
    nu: F,
    samples: usize,
) -> Result<Vec<(F, F)>> {
    if samples < 4 || !samples.is_multiple_of(2) {
        return Err(Error::InvalidParameter { what: "samples must be even and >= 4".into() });
    }
    let cfg = RadialConfig::new(dim, outer_radius)?;
    let f_nu = f1.f_raw(nu);
    if !(f_nu > F::zero()) {
        return Err(Error::SingularAtPeak { nu: as_f64(nu) });
    }
    let len = cfg.b - cfg.a;
    let weight = cfg.weight_inf();
    let lambda = lambda_reduced(f1, nu, weight, len, real(1e-12))?;
    let mu = lambda * weight; // -z'' = μ f₁(z) on (a, b)

    let ge = GapEvaluator::new(f1, nu)?;
    let two = real::<F>(2.0);
    let scale = (two * mu).sqrt().recip();
    let limit = two / f_nu.sqrt();
    let integrand = |w: F| {
        let d = w * w;
        if d <= F::zero() {
            return limit;
        }
        let g = ge.gap_near_peak(d);
        if !(g > F::zero()) {
            return F::infinity();
        }
        two * w / g.sqrt()
    };
    let mesh = (samples * 8).max(512);
    let mut zs_grid = Vec::with_capacity(mesh + 1);
    let mut ws = Vec::with_capacity(mesh + 1);
    for j in 0..=mesh {
        let theta = F::FRAC_PI_2() * real::<F>(j as f64 / mesh as f64);
        let z = nu * theta.sin();
        zs_grid.push(z);
        ws.push((nu - z).max(F::zero()).sqrt());
    }
    let mut xs = Vec::with_capacity(mesh + 1);
    xs.push(F::zero());
    let mut acc = F::zero();
    for j in 1..=mesh {
        let seg = crate::quadrature::integrate(integrand, ws[j], ws[j - 1], real(3e-11))?.value;
        acc += seg;
        xs.push(acc);
    }
    for x in xs.iter_mut() {
        *x *= scale;
    }
    let x_peak = *xs.last().unwrap();

    let pairs: Vec<(F, F)> = xs.iter().copied().zip(zs_grid.iter().copied()).collect();
    let inverse = MonotoneCubic::new(&pairs)?;

    let half = len / two;
    let mut out = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let s = cfg.a + len * real::<F>(i as f64 / samples as f64);
        let d = if s - cfg.a <= half { s - cfg.a } else { cfg.b - s };
        let z = if d >= x_peak { nu } else { inverse.eval(d).max(F::zero()).min(nu) };
        out.push((s, z));
    }
    Ok(out)
}

/// Radial subsolution profile `w(radius)` on `[R/2, R]`, obtained from the
/// reduced profile through the change of variables; `w(R/2) = w(R) = 0` and
/// `max w = ν`.
pub fn subsolution_profile<F: Real>(
    f1: &Nonlinearity<F>,
    dim: u32,
    outer_radius: F,
    nu: F,
    samples: usize,
) -> Result<Vec<(F, F)>> {
    let cfg = RadialConfig::new(dim, outer_radius)?;
    let reduced = reduced_profile(f1, dim, outer_radius, nu, samples)?;
    let mut out: Vec<(F, F)> = reduced.into_iter().map(|(s, z)| (cfg.radius_of(s), z)).collect();
    out.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(out)
}
