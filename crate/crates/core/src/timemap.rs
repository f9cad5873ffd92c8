//! Exact one-dimensional bifurcation engine on `Ω = (0, L)`.
//!
//! A positive symmetric solution of `-u'' = λ f(u)`, `u(0) = u(L) = 0` with
//! peak `ν = ‖u‖_∞` satisfies the energy identity
//! `u'²/2 + λ F(u) = λ F(ν)`, so its half-length is
//! `L/2 = f̂(ν)/√(2λ)` and the branch is the exact curve
//!
//! `λ(ν) = 2 f̂(ν)² / L²`.
//!
//! Since the time map parameterizes every positive solution by its peak,
//! the branch minimum over an inter-zero window is the window's exact
//! minimal parameter `λ_n`, and the crossings of `λ(ν) = λ` count the
//! solutions at that parameter.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::nonlinearity::{LimitBehavior, MonotoneCubic, Nonlinearity};
use crate::quadrature::{fhat, GapEvaluator, DEFAULT_TOL};
use crate::scalar::{as_f64, real, Real};
use crate::search::{bisect_root, golden_min};

/// One sampled point of a bifurcation branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint<F> {
    /// Peak value `‖u‖_∞`.
    pub nu: F,
    pub lambda: F,
    /// Error estimate propagated from the endpoint quadrature.
    pub quad_error: F,
}

/// Sampled branch `{(ν, λ(ν))}` over one inter-zero window.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationBranch<F> {
    /// Window index.
    pub n: u32,
    /// Ascending window `(lo, hi)` between consecutive zeros.
    pub window: (F, F),
    pub points: Vec<BranchPoint<F>>,
    pub lambda_min: F,
    pub nu_at_min: F,
    /// Grid peaks whose quadrature failed, with the failure note.
    pub failed: Vec<(F, String)>,
    nl: Nonlinearity<F>,
    length: F,
}

impl<F: Real> BifurcationBranch<F> {
    pub fn nonlinearity(&self) -> &Nonlinearity<F> {
        &self.nl
    }

    pub fn interval_length(&self) -> F {
        self.length
    }
}

/// How a sequence entry was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TimeMap1D,
    RadialUpperBound,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::TimeMap1D => "time_map_1d",
            Method::RadialUpperBound => "radial_upper_bound",
        }
    }
}

/// One entry of a `n ↦ λ_n` sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceEntry<F> {
    pub lambda: F,
    pub nu_at_min: F,
    pub method: Method,
}

/// The sequence `n ↦ λ_n` (or an upper-bound surrogate), with per-window
/// failures recorded instead of aborting the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSequence<F> {
    pub entries: BTreeMap<u32, SequenceEntry<F>>,
    pub failures: BTreeMap<u32, String>,
}

impl<F> Default for LambdaSequence<F> {
    fn default() -> Self {
        Self { entries: BTreeMap::new(), failures: BTreeMap::new() }
    }
}

impl<F: Real> LambdaSequence<F> {
    /// Lambda values in index order.
    pub fn lambdas(&self) -> impl Iterator<Item = (u32, F)> + '_ {
        self.entries.iter().map(|(&n, e)| (n, e.lambda))
    }
}

/// `λ(ν) = 2 f̂(ν)²/L²` at the default quadrature tolerance.
pub fn lambda_of_nu<F: Real>(nl: &Nonlinearity<F>, length: F, nu: F) -> Result<F> {
    lambda_of_nu_tol(nl, length, nu, real(DEFAULT_TOL))
}

/// `λ(ν)` with an explicit relative quadrature tolerance.
pub fn lambda_of_nu_tol<F: Real>(nl: &Nonlinearity<F>, length: F, nu: F, tol: F) -> Result<F> {
    check_length(length)?;
    let fh = fhat(nl, nu, tol)?;
    Ok(real::<F>(2.0) * fh.value * fh.value / (length * length))
}

fn check_length<F: Real>(length: F) -> Result<()> {
    if !(length > F::zero()) || !length.is_finite() {
        return Err(Error::InvalidParameter { what: format!("interval length L = {} must be positive", as_f64(length)) });
    }
    Ok(())
}

/// Samples the branch over the n-th inter-zero window on a grid of `grid`
/// peaks, cosine-clustered toward both window endpoints (where `λ(ν)`
/// diverges), then refines the minimum by golden section to ~1e-8 relative
/// in `ν`.
pub fn branch<F: Real>(nl: &Nonlinearity<F>, length: F, n: u32, grid: usize) -> Result<BifurcationBranch<F>> {
    branch_tol(nl, length, n, grid, real(DEFAULT_TOL))
}

pub fn branch_tol<F: Real>(
    nl: &Nonlinearity<F>,
    length: F,
    n: u32,
    grid: usize,
    tol: F,
) -> Result<BifurcationBranch<F>> {
    check_length(length)?;
    if grid < 8 {
        return Err(Error::InvalidParameter { what: format!("grid must be >= 8, got {grid}") });
    }
    let zs = nl.zeros(n + 1)?;
    let (lo, hi) = zs.window(n).expect("zeros(n+1) covers window n");

    let two = real::<F>(2.0);
    let mid = (lo + hi) / two;
    let half = (hi - lo) / two;
    let lam = |nu: F| -> Result<(F, F)> {
        let fh = fhat(nl, nu, tol)?;
        let l = two * fh.value * fh.value / (length * length);
        // d(λ)/λ = 2 d(f̂)/f̂
        let err = two * l * (fh.abs_error_estimate / fh.value.abs().max(F::min_positive_value()));
        Ok((l, err))
    };

    let mut points = Vec::with_capacity(grid);
    let mut failed = Vec::new();
    for i in 0..grid {
        let theta = F::PI() * real::<F>((i as f64 + 0.5) / grid as f64);
        let nu = mid - half * theta.cos();
        match lam(nu) {
            Ok((l, e)) => points.push(BranchPoint { nu, lambda: l, quad_error: e }),
            Err(err) => failed.push((nu, err.to_string())),
        }
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter {
            what: format!("no branch point of window {n} could be evaluated"),
        });
    }

    let mut min_idx = 0;
    for (i, p) in points.iter().enumerate() {
        if p.lambda < points[min_idx].lambda {
            min_idx = i;
        }
    }
    let bracket_lo = if min_idx == 0 { lo + (points[0].nu - lo) * real(1e-3) } else { points[min_idx - 1].nu };
    let bracket_hi = if min_idx + 1 == points.len() {
        hi - (hi - points[min_idx].nu) * real(1e-3)
    } else {
        points[min_idx + 1].nu
    };
    let (nu_ref, lam_ref) = golden_min(
        |nu| lam(nu).map(|(l, _)| l).unwrap_or(F::infinity()),
        bracket_lo,
        bracket_hi,
        48,
    );

    let (nu_at_min, lambda_min) = if lam_ref < points[min_idx].lambda {
        (nu_ref, lam_ref)
    } else {
        (points[min_idx].nu, points[min_idx].lambda)
    };

    Ok(BifurcationBranch {
        n,
        window: (lo, hi),
        points,
        lambda_min,
        nu_at_min,
        failed,
        nl: nl.clone(),
        length,
    })
}

/// `λ_n` for `n = 1..n_max` from the exact branch minima.
pub fn lambda_n_sequence<F: Real>(nl: &Nonlinearity<F>, length: F, n_max: u32) -> Result<LambdaSequence<F>> {
    lambda_n_sequence_range(nl, length, 1, n_max, 33, real(DEFAULT_TOL))
}

/// `λ_n` over an index range with explicit grid size and tolerance.
pub fn lambda_n_sequence_range<F: Real>(
    nl: &Nonlinearity<F>,
    length: F,
    n_min: u32,
    n_max: u32,
    grid: usize,
    tol: F,
) -> Result<LambdaSequence<F>> {
    if n_min == 0 || n_max < n_min {
        return Err(Error::InvalidParameter {
            what: format!("need 1 <= n_min <= n_max, got {n_min}..{n_max}"),
        });
    }
    check_length(length)?;
    let mut seq = LambdaSequence::default();
    for n in n_min..=n_max {
        match branch_tol(nl, length, n, grid, tol) {
            Ok(br) => {
                seq.entries.insert(
                    n,
                    SequenceEntry { lambda: br.lambda_min, nu_at_min: br.nu_at_min, method: Method::TimeMap1D },
                );
            }
            Err(e) => {
                seq.failures.insert(n, e.to_string());
            }
        }
    }
    Ok(seq)
}

/// All peaks `ν` in the branch window with `λ(ν) = lambda`.
///
/// Crossings are located by sign changes along the sampled branch (with the
/// refined minimum inserted) and sharpened by bisection. Exactly the branch
/// minimum yields the single tangent peak; any `lambda` below it yields
/// nothing. Fails with [`Error::DegenerateBranch`] when the branch is flat.
pub fn solutions_at_lambda<F: Real>(br: &BifurcationBranch<F>, lambda: F) -> Result<Vec<F>> {
    if br.points.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: br.points.len() });
    }
    let mut lam_max = F::neg_infinity();
    for p in &br.points {
        lam_max = lam_max.max(p.lambda);
    }
    if lam_max - br.lambda_min <= real::<F>(1e-9) * lam_max.abs() {
        return Err(Error::DegenerateBranch);
    }

    let rel = real::<F>(1e-9);
    if lambda < br.lambda_min * (F::one() - rel) {
        return Ok(Vec::new());
    }
    if (lambda - br.lambda_min).abs() <= rel * br.lambda_min.abs() {
        return Ok(vec![br.nu_at_min]);
    }

    let tol = real::<F>(DEFAULT_TOL);
    let g = |nu: F| match lambda_of_nu_tol(&br.nl, br.length, nu, tol) {
        Ok(l) => l - lambda,
        Err(_) => F::infinity(),
    };

    // walk the sampled curve with the refined minimum spliced in
    let mut nodes: Vec<(F, F)> = br.points.iter().map(|p| (p.nu, p.lambda - lambda)).collect();
    let pos = nodes.partition_point(|&(nu, _)| nu < br.nu_at_min);
    nodes.insert(pos, (br.nu_at_min, br.lambda_min - lambda));

    let mut roots: Vec<F> = Vec::new();
    for w in nodes.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if y0 == F::zero() {
            roots.push(x0);
        } else if y0 * y1 < F::zero() {
            roots.push(bisect_root(g, x0, x1, real(1e-10)));
        }
    }
    if let Some(&(x_last, y_last)) = nodes.last() {
        if y_last == F::zero() {
            roots.push(x_last);
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= real::<F>(1e-9) * b.abs().max(F::one()));
    Ok(roots)
}

/// Solution profile with peak `ν`, reconstructed from the inverse map
/// `x(u) = (2λ)^{-1/2} ∫_0^u ds/√(F(ν)-F(s))` on `[0, L/2]` and mirrored.
///
/// Returns `samples + 1` points on a uniform x-grid over `[0, L]`, with
/// `u(0) = u(L) = 0` and `u(L/2) = ν`.
pub fn profile<F: Real>(nl: &Nonlinearity<F>, length: F, nu: F, samples: usize) -> Result<Vec<(F, F)>> {
    check_length(length)?;
    if samples < 4 {
        return Err(Error::InvalidParameter { what: format!("samples must be >= 4, got {samples}") });
    }
    if !samples.is_multiple_of(2) {
        return Err(Error::InvalidParameter { what: "samples must be even so the midpoint is a grid node".into() });
    }
    let f_nu = nl.f_raw(nu);
    if !(f_nu > F::zero()) {
        return Err(Error::SingularAtPeak { nu: as_f64(nu) });
    }
    let lambda = lambda_of_nu_tol(nl, length, nu, real(1e-12))?;

    // dense cumulative table of x(u) on a grid clustered toward the peak;
    // every cell is integrated in w = √(ν-s), where the integrand
    // 2w/√(F(ν)-F(ν-w²)) is smooth all the way into the peak
    let ge = GapEvaluator::new(nl, nu)?;
    let mesh = (samples * 8).max(512);
    let two = real::<F>(2.0);
    let scale = (two * lambda).sqrt().recip();
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
    let mut us = Vec::with_capacity(mesh + 1);
    let mut ws = Vec::with_capacity(mesh + 1);
    for j in 0..=mesh {
        let theta = F::FRAC_PI_2() * real::<F>(j as f64 / mesh as f64);
        let u = nu * theta.sin();
        us.push(u);
        ws.push((nu - u).max(F::zero()).sqrt());
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

    // invert the strictly increasing x(u) table
    let pairs: Vec<(F, F)> = xs.iter().copied().zip(us.iter().copied()).collect();
    let inverse = MonotoneCubic::new(&pairs)?;

    let half_len = length / two;
    let mut out = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let x = length * real::<F>(i as f64 / samples as f64);
        let x_half = if x <= half_len { x } else { length - x };
        let u = if x_half >= x_peak { nu } else { inverse.eval(x_half).max(F::zero()).min(nu) };
        out.push((x, u));
    }
    Ok(out)
}

/// Parameter threshold below which no solution with `‖u‖_∞ < δ` exists,
/// for nonlinearities sublinear at zero: `λ₁/ε(δ)` with `λ₁ = π²/L²` and
/// `ε(δ) = sup_{0<s<δ} f(s)/s`.
///
/// Returns `+∞` when `f` vanishes identically below `δ` (nothing small can
/// ever solve), and rejects families with `f(s)/s` unbounded near zero.
pub fn nonexistence_threshold<F: Real>(nl: &Nonlinearity<F>, length: F, delta: F) -> Result<F> {
    check_length(length)?;
    if !(delta > F::zero()) || !delta.is_finite() {
        return Err(Error::InvalidParameter { what: "delta must be positive".into() });
    }
    match nl.classify_limits().at_zero {
        LimitBehavior::Superlinear => return Err(Error::UnboundedSlopeAtZero),
        LimitBehavior::Oscillatory { limsup, .. } if limsup.is_infinite() => {
            return Err(Error::UnboundedSlopeAtZero)
        }
        _ => {}
    }

    let eps = sup_ratio_below(nl, delta);
    let lambda1 = F::PI() * F::PI() / (length * length);
    if !(eps > F::zero()) {
        return Ok(F::infinity());
    }
    Ok(lambda1 / eps)
}

/// `sup_{0<s<δ} f(s)/s` by a log grid plus golden refinement around the
/// best samples.
fn sup_ratio_below<F: Real>(nl: &Nonlinearity<F>, delta: F) -> F {
    let ratio = |s: F| nl.f_raw(s) / s;
    let n = 4000usize;
    let lo = delta * real::<F>(1e-8);
    let mut best = (delta, ratio(delta));
    let mut samples: Vec<(F, F)> = Vec::with_capacity(n);
    for i in 0..n {
        let s = delta * (lo / delta).powf(real::<F>(i as f64 / (n - 1) as f64));
        let v = ratio(s);
        if v > best.1 {
            best = (s, v);
        }
        samples.push((s, v));
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let idx = samples.iter().position(|&(s, _)| s == best.0).unwrap_or(0);
    let a = if idx == 0 { lo * real(0.5) } else { samples[idx - 1].0 };
    let b = if idx + 1 >= samples.len() { delta } else { samples[idx + 1].0 };
    let (_, neg_max) = golden_min(|s| -ratio(s), a, b, 48);
    best.1.max(-neg_max)
}
