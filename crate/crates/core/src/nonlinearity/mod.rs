//! Nonlinearity families for `-Δu = λ f(u)`: oscillatory model families
//! built on `t^r (1 + sin t)` and `t^r (1 + sin(1/t))`, simple reference
//! families (constant, linear, pure power), and user-tabulated functions.
//!
//! Every family is nonnegative on `t >= 0`. The oscillatory families carry a
//! positive bounded multiplier `g` with a certified infimum `γ > 0`; `g`
//! defaults to the constant 1.

mod interp;

pub use interp::MonotoneCubic;

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};
use crate::search::{golden_min, linear_fit};

/// Multiplier `g` attached to the oscillatory families.
#[derive(Debug, Clone, PartialEq)]
pub enum GSpec<F> {
    /// `g ≡ γ` for some `γ > 0`.
    Const(F),
    /// Sampled positive bounded `g` with a certified infimum; the table is
    /// interpolated monotone-cubically and extended constantly outside its
    /// range.
    Table { table: MonotoneCubic<F>, infimum: F },
}

impl<F: Real> GSpec<F> {
    pub fn table(points: &[(F, F)], certified_infimum: F) -> Result<Self> {
        if !(certified_infimum > F::zero()) {
            return Err(Error::InvalidParameter {
                what: "multiplier infimum must be positive".into(),
            });
        }
        let table = MonotoneCubic::new(points)?;
        if table.min_value() < certified_infimum {
            return Err(Error::InvalidParameter {
                what: format!(
                    "certified infimum {} exceeds smallest multiplier sample {}",
                    as_f64(certified_infimum),
                    as_f64(table.min_value())
                ),
            });
        }
        Ok(GSpec::Table { table, infimum: certified_infimum })
    }

    /// Certified lower bound `γ = inf g > 0`.
    pub fn infimum(&self) -> F {
        match self {
            GSpec::Const(g) => *g,
            GSpec::Table { infimum, .. } => *infimum,
        }
    }

    /// Upper bound used by the limit classifier (max of the samples for a
    /// table, the constant itself otherwise).
    pub fn supremum(&self) -> F {
        match self {
            GSpec::Const(g) => *g,
            GSpec::Table { table, .. } => table.knots().map(|(_, y)| y).fold(F::zero(), F::max),
        }
    }

    pub fn eval(&self, t: F) -> F {
        match self {
            GSpec::Const(g) => *g,
            GSpec::Table { table, .. } => table.eval(t),
        }
    }

    fn as_const(&self) -> Option<F> {
        match self {
            GSpec::Const(g) => Some(*g),
            GSpec::Table { .. } => None,
        }
    }
}

/// Discriminant of the built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `f(t) = t^r (1 + sin t) g(t)`; zeros diverge.
    SineU,
    /// `f(t) = t^r (1 + sin(1/t)) g(t)`; zeros vanish.
    InverseSineU,
    /// Inverse-sine oscillation shifted so the zeros accumulate at a
    /// positive `α`; `f ≡ 0` on `[0, α]`.
    ShiftedInverseSine,
    Constant,
    Linear,
    Power,
    UserTable,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::SineU => "sine_u",
            FamilyKind::InverseSineU => "inverse_sine_u",
            FamilyKind::ShiftedInverseSine => "shifted_inverse_sine",
            FamilyKind::Constant => "constant",
            FamilyKind::Linear => "linear",
            FamilyKind::Power => "power",
            FamilyKind::UserTable => "user_table",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Family<F> {
    SineU { r: F },
    InverseSineU { r: F },
    ShiftedInverseSine { r: F, alpha: F },
    Constant { c: F },
    Linear { slope: F },
    Power { r: F },
    UserTable { table: MonotoneCubic<F> },
}

/// Oscillation geometry, used by the quadrature layer to lay out panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum OscShape<F> {
    /// No oscillatory factor (closed-form or knot-exact integrals).
    None,
    /// `sin t`: period `2π` in `t`.
    SineArg,
    /// `sin(1/(t - shift))`: unbounded frequency as `t → shift⁺`.
    InverseArg { shift: F },
}

/// A nonnegative nonlinearity `f` with its antiderivative, zero structure
/// and the one-sided monotonicity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity<F> {
    family: Family<F>,
    g: GSpec<F>,
}

fn check_r<F: Real>(r: F) -> Result<F> {
    if !r.is_finite() || r < F::zero() {
        return Err(Error::ExponentOutOfRange {
            r: as_f64(r),
            what: "exponent must be finite and >= 0",
        });
    }
    Ok(r)
}

impl<F: Real> Nonlinearity<F> {
    /// `f(t) = t^r (1 + sin t)`.
    pub fn sine_u(r: F) -> Result<Self> {
        Ok(Self { family: Family::SineU { r: check_r(r)? }, g: GSpec::Const(F::one()) })
    }

    /// `f(t) = t^r (1 + sin(1/t))`, extended by `f(0) = 0`.
    pub fn inverse_sine_u(r: F) -> Result<Self> {
        Ok(Self { family: Family::InverseSineU { r: check_r(r)? }, g: GSpec::Const(F::one()) })
    }

    /// `f(t) = t^r (1 + sin(1/(t - α)))` for `t > α`, zero on `[0, α]`.
    /// The zeros `α + 1/(2πn - π/2)` accumulate at `α` from above.
    pub fn shifted_inverse_sine(r: F, alpha: F) -> Result<Self> {
        if !(alpha > F::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter { what: "shift alpha must be positive".into() });
        }
        Ok(Self {
            family: Family::ShiftedInverseSine { r: check_r(r)?, alpha },
            g: GSpec::Const(F::one()),
        })
    }

    /// `f ≡ c` with `c > 0`.
    pub fn constant(c: F) -> Result<Self> {
        if !(c > F::zero()) || !c.is_finite() {
            return Err(Error::InvalidParameter { what: "constant value must be positive".into() });
        }
        Ok(Self { family: Family::Constant { c }, g: GSpec::Const(F::one()) })
    }

    /// `f(t) = m t` with `m > 0`.
    pub fn linear(slope: F) -> Result<Self> {
        if !(slope > F::zero()) || !slope.is_finite() {
            return Err(Error::InvalidParameter { what: "linear slope must be positive".into() });
        }
        Ok(Self { family: Family::Linear { slope }, g: GSpec::Const(F::one()) })
    }

    /// `f(t) = t^r`.
    pub fn power(r: F) -> Result<Self> {
        Ok(Self { family: Family::Power { r: check_r(r)? }, g: GSpec::Const(F::one()) })
    }

    /// Nonnegative tabulated `f`, interpolated monotone-cubically (clamped
    /// to `>= 0`) and extended constantly outside the sample range.
    pub fn user_table(points: &[(F, F)]) -> Result<Self> {
        for &(x, y) in points {
            if x < F::zero() || y < F::zero() {
                return Err(Error::InvalidParameter {
                    what: "table samples must have t >= 0 and f >= 0".into(),
                });
            }
        }
        Ok(Self {
            family: Family::UserTable { table: MonotoneCubic::new(points)? },
            g: GSpec::Const(F::one()),
        })
    }

    /// Attaches a multiplier `g` (oscillatory families only).
    pub fn with_g(mut self, g: GSpec<F>) -> Result<Self> {
        match self.family {
            Family::SineU { .. } | Family::InverseSineU { .. } | Family::ShiftedInverseSine { .. } => {
                if !(g.infimum() > F::zero()) {
                    return Err(Error::InvalidParameter {
                        what: "multiplier infimum must be positive".into(),
                    });
                }
                self.g = g;
                Ok(self)
            }
            _ => Err(Error::InvalidParameter {
                what: "multiplier g only applies to the oscillatory families".into(),
            }),
        }
    }

    /// Shorthand for a constant multiplier `g ≡ γ`.
    pub fn with_gamma(self, gamma: F) -> Result<Self> {
        self.with_g(GSpec::Const(gamma))
    }

    pub fn kind(&self) -> FamilyKind {
        match self.family {
            Family::SineU { .. } => FamilyKind::SineU,
            Family::InverseSineU { .. } => FamilyKind::InverseSineU,
            Family::ShiftedInverseSine { .. } => FamilyKind::ShiftedInverseSine,
            Family::Constant { .. } => FamilyKind::Constant,
            Family::Linear { .. } => FamilyKind::Linear,
            Family::Power { .. } => FamilyKind::Power,
            Family::UserTable { .. } => FamilyKind::UserTable,
        }
    }

    pub fn r_exponent(&self) -> Option<F> {
        match self.family {
            Family::SineU { r }
            | Family::InverseSineU { r }
            | Family::ShiftedInverseSine { r, .. }
            | Family::Power { r } => Some(r),
            _ => None,
        }
    }

    pub fn shift_alpha(&self) -> Option<F> {
        match self.family {
            Family::ShiftedInverseSine { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn g_spec(&self) -> &GSpec<F> {
        &self.g
    }

    /// Certified `γ = inf g`.
    pub fn gamma(&self) -> F {
        self.g.infimum()
    }

    /// Same family with `g ≡ 1` (the γ-normalized comparison function).
    pub fn unit_multiplier(&self) -> Self {
        Self { family: self.family.clone(), g: GSpec::Const(F::one()) }
    }

    pub(crate) fn g_const(&self) -> Option<F> {
        self.g.as_const()
    }

    pub(crate) fn osc_shape(&self) -> OscShape<F> {
        match self.family {
            Family::SineU { .. } => OscShape::SineArg,
            Family::InverseSineU { .. } => OscShape::InverseArg { shift: F::zero() },
            Family::ShiftedInverseSine { alpha, .. } => OscShape::InverseArg { shift: alpha },
            _ => OscShape::None,
        }
    }

    /// Unchecked point evaluation on `t >= 0`.
    pub(crate) fn f_raw(&self, t: F) -> F {
        debug_assert!(t >= F::zero());
        match &self.family {
            Family::Constant { c } => *c,
            Family::Linear { slope } => *slope * t,
            Family::Power { r } => t.powf(*r),
            Family::UserTable { table } => table.eval(t).max(F::zero()),
            Family::SineU { r } => self.g.eval(t) * t.powf(*r) * (F::one() + t.sin()),
            Family::InverseSineU { r } => {
                if t <= F::zero() {
                    return F::zero();
                }
                let inv = t.recip();
                if !inv.is_finite() {
                    return F::zero();
                }
                self.g.eval(t) * t.powf(*r) * (F::one() + inv.sin())
            }
            Family::ShiftedInverseSine { r, alpha } => {
                if t <= *alpha {
                    return F::zero();
                }
                let inv = (t - *alpha).recip();
                if !inv.is_finite() {
                    return F::zero();
                }
                self.g.eval(t) * t.powf(*r) * (F::one() + inv.sin())
            }
        }
    }

    /// `f` extended constantly below zero (only relevant to the shooting
    /// integrator, which may overshoot into `u < 0`).
    pub(crate) fn f_extended(&self, t: F) -> F {
        self.f_raw(t.max(F::zero()))
    }

    /// `∫_a^b f` in closed form where one exists (non-oscillatory families).
    pub(crate) fn closed_integral(&self, a: F, b: F) -> Option<F> {
        let half = real::<F>(0.5);
        match &self.family {
            Family::Constant { c } => Some(*c * (b - a)),
            Family::Linear { slope } => Some(*slope * (b - a) * (b + a) * half),
            Family::Power { r } => Some(power_diff(a, b, *r + F::one())),
            Family::UserTable { table } => Some(table.integral(a, b)),
            _ => None,
        }
    }

    /// Closed-form derivative where one exists (away from kinks).
    pub(crate) fn f_prime(&self, t: F) -> Option<F> {
        let g = self.g.as_const()?;
        match &self.family {
            Family::Constant { .. } => Some(F::zero()),
            Family::Linear { slope } => Some(*slope),
            Family::Power { r } => {
                if t <= F::zero() {
                    None
                } else {
                    Some(*r * t.powf(*r - F::one()))
                }
            }
            Family::UserTable { .. } => None,
            Family::SineU { r } => {
                if t <= F::zero() {
                    return None;
                }
                let w = F::one() + t.sin();
                Some(g * (*r * t.powf(*r - F::one()) * w + t.powf(*r) * t.cos()))
            }
            Family::InverseSineU { r } => {
                if t <= F::zero() {
                    return None;
                }
                let inv = t.recip();
                let w = F::one() + inv.sin();
                Some(g * (*r * t.powf(*r - F::one()) * w - t.powf(*r - real(2.0)) * inv.cos()))
            }
            Family::ShiftedInverseSine { r, alpha } => {
                if t <= *alpha {
                    return Some(F::zero());
                }
                let u = t - *alpha;
                let inv = u.recip();
                let w = F::one() + inv.sin();
                Some(g * (*r * t.powf(*r - F::one()) * w - t.powf(*r) * inv.cos() / (u * u)))
            }
        }
    }

    /// Point evaluation of `f(t)`, rejecting negative arguments.
    pub fn eval_f(&self, t: F) -> Result<F> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter { what: format!("t = {} not finite", as_f64(t)) });
        }
        if t < F::zero() {
            return Err(Error::NegativeArgument { t: as_f64(t) });
        }
        Ok(self.f_raw(t))
    }

    /// Antiderivative `F(t) = ∫_0^t f`, with `F(0) = 0`.
    ///
    /// Closed form for the constant, linear and power families and for
    /// `t^r (1 + sin t)` with constant `g` and `r ∈ {0, 1}`; panel quadrature
    /// (well below 1e-12 relative) otherwise.
    pub fn eval_big_f(&self, t: F) -> Result<F> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter { what: format!("t = {} not finite", as_f64(t)) });
        }
        if t < F::zero() {
            return Err(Error::NegativeArgument { t: as_f64(t) });
        }
        let two = real::<F>(2.0);
        match (&self.family, self.g.as_const()) {
            (Family::Constant { c }, _) => return Ok(*c * t),
            (Family::Linear { slope }, _) => return Ok(*slope * t * t / two),
            (Family::Power { r }, _) => return Ok(t.powf(*r + F::one()) / (*r + F::one())),
            (Family::UserTable { table }, _) => return Ok(table.integral(F::zero(), t)),
            (Family::SineU { r }, Some(g)) if *r == F::zero() => {
                return Ok(g * (t - t.cos() + F::one()));
            }
            (Family::SineU { r }, Some(g)) if *r == F::one() => {
                return Ok(g * (t * t / two + t.sin() - t * t.cos()));
            }
            _ => {}
        }
        Ok(crate::quadrature::integral_of_f(self, F::zero(), t))
    }

    /// Ordered zero/peak structure `α_n`, `ν_n` for `n = 1..n_max`.
    ///
    /// Rejects families whose zero set is empty or `{0}`.
    pub fn zeros(&self, n_max: u32) -> Result<ZeroStructure<F>> {
        if n_max == 0 {
            return Err(Error::InvalidParameter { what: "n_max must be >= 1".into() });
        }
        let pi = F::PI();
        let half = real::<F>(0.5);
        let two = real::<F>(2.0);
        match &self.family {
            Family::SineU { .. } => {
                let mut zeros = Vec::with_capacity(n_max as usize);
                let mut peaks = Vec::with_capacity(n_max as usize);
                for n in 1..=n_max {
                    let k = real::<F>(n as f64);
                    zeros.push(pi * (two * k - half));
                    peaks.push(pi * (two * k + half));
                }
                let inf = zeros[0];
                Ok(ZeroStructure {
                    zeros,
                    peaks,
                    accumulation: Accumulation::Infinity,
                    inf_zero: inf,
                    sup_zero: F::infinity(),
                    increasing: true,
                })
            }
            Family::InverseSineU { .. } => {
                let mut zeros = Vec::with_capacity(n_max as usize);
                let mut peaks = Vec::with_capacity(n_max as usize);
                for n in 1..=n_max {
                    let k = real::<F>(n as f64);
                    zeros.push((pi * (two * k - half)).recip());
                    peaks.push((pi * (two * k + half)).recip());
                }
                let sup = zeros[0];
                Ok(ZeroStructure {
                    zeros,
                    peaks,
                    accumulation: Accumulation::Zero,
                    inf_zero: F::zero(),
                    sup_zero: sup,
                    increasing: false,
                })
            }
            Family::ShiftedInverseSine { alpha, .. } => {
                let mut zeros = Vec::with_capacity(n_max as usize);
                let mut peaks = Vec::with_capacity(n_max as usize);
                for n in 1..=n_max {
                    let k = real::<F>(n as f64);
                    zeros.push(*alpha + (pi * (two * k - half)).recip());
                    peaks.push(*alpha + (pi * (two * k + half)).recip());
                }
                let sup = zeros[0];
                Ok(ZeroStructure {
                    zeros,
                    peaks,
                    accumulation: Accumulation::Finite(*alpha),
                    inf_zero: *alpha,
                    sup_zero: sup,
                    increasing: false,
                })
            }
            _ => Err(Error::FamilyWithoutZeros { family: self.kind().as_str() }),
        }
    }

    /// Whether `s ↦ f(s) + M s` is nondecreasing on `(σ - ε, σ)`.
    ///
    /// Decided by the sign of the closed-form derivative where one exists,
    /// otherwise by monotonicity of a dense sample; either way this is a
    /// sampled check (grid of 10^4 points plus endpoint refinement), not a
    /// proof.
    pub fn check_condition_local(&self, sigma: F, m: F, eps: F) -> Result<bool> {
        if !(eps > F::zero() && eps < sigma) {
            return Err(Error::InvalidParameter {
                what: format!("need 0 < eps < sigma, got eps = {}, sigma = {}", as_f64(eps), as_f64(sigma)),
            });
        }
        Ok(monotone_with_shift(
            |s| self.f_raw(s),
            self.derivative_closure(),
            sigma - eps,
            sigma,
            m,
        ))
    }

    /// Whether `s ↦ f(s) + M s` is nondecreasing on `(0, σ)`.
    pub fn check_condition_global(&self, sigma: F, m: F) -> Result<bool> {
        if !(sigma > F::zero()) {
            return Err(Error::InvalidParameter { what: "sigma must be positive".into() });
        }
        Ok(monotone_with_shift(
            |s| self.f_raw(s),
            self.derivative_closure(),
            F::zero(),
            sigma,
            m,
        ))
    }

    fn derivative_closure(&self) -> Option<impl Fn(F) -> F + '_> {
        // probe once: derivative formulas exist exactly when g is constant
        // and the family is not a user table
        let probe = self.f_prime(F::one());
        if probe.is_some() {
            Some(move |s: F| self.f_prime(s).unwrap_or(F::infinity()))
        } else {
            None
        }
    }

    /// `(M, ε)` witnessing the one-sided monotonicity at the n-th zero.
    ///
    /// The window width follows the oscillation scale: `π/4` for the
    /// diverging-zero family, shrinking quadratically (`π/4 · α_n²`, resp.
    /// `π/4 · (α_n - α)²`) for the vanishing-zero families. `M` exceeds the
    /// numerically observed derivative dip by 1.
    pub fn condition_witness(&self, n: u32) -> Result<(F, F)> {
        let zs = self.zeros(n)?;
        let sigma = zs.zero(n).unwrap();
        let quarter_pi = F::FRAC_PI_4();
        let eps = match self.family {
            Family::SineU { .. } => quarter_pi,
            Family::InverseSineU { .. } => quarter_pi * sigma * sigma,
            Family::ShiftedInverseSine { alpha, .. } => {
                let d = sigma - alpha;
                quarter_pi * d * d
            }
            _ => return Err(Error::FamilyWithoutZeros { family: self.kind().as_str() }),
        };
        let lo = sigma - eps;
        let grid = 512;
        let mut worst = F::infinity();
        for i in 1..grid {
            let s = lo + (sigma - lo) * real::<F>(i as f64 / grid as f64);
            if let Some(d) = self.f_prime(s) {
                worst = worst.min(d);
            }
        }
        let m = F::one() + (-worst).max(F::zero());
        Ok((m, eps))
    }

    /// Growth classification of `f(s)/s` at zero and at infinity.
    pub fn classify_limits(&self) -> Limits<F> {
        let g0 = self.g.eval(F::zero());
        let g_sup = self.g.supremum();
        let two = real::<F>(2.0);
        let r1 = F::one();
        match &self.family {
            Family::Constant { .. } => Limits {
                at_zero: LimitBehavior::Superlinear,
                at_infinity: LimitBehavior::Sublinear,
                heuristic: false,
            },
            Family::Linear { slope } => Limits {
                at_zero: LimitBehavior::Linear { m: *slope },
                at_infinity: LimitBehavior::Linear { m: *slope },
                heuristic: false,
            },
            Family::Power { r } => Limits {
                at_zero: power_side(*r, F::one(), false),
                at_infinity: power_side(*r, F::one(), true),
                heuristic: false,
            },
            Family::SineU { r } => {
                let at_zero = power_side(*r, g0, false);
                let at_infinity = if *r > r1 {
                    LimitBehavior::Oscillatory { liminf: F::zero(), limsup: F::infinity() }
                } else if *r == r1 {
                    LimitBehavior::Oscillatory { liminf: F::zero(), limsup: two * g_sup }
                } else {
                    LimitBehavior::Sublinear
                };
                Limits { at_zero, at_infinity, heuristic: false }
            }
            Family::InverseSineU { r } => {
                let at_zero = if *r > r1 {
                    LimitBehavior::Sublinear
                } else if *r == r1 {
                    LimitBehavior::Oscillatory { liminf: F::zero(), limsup: two * g0 }
                } else {
                    LimitBehavior::Oscillatory { liminf: F::zero(), limsup: F::infinity() }
                };
                Limits { at_zero, at_infinity: power_side(*r, g_sup, true), heuristic: false }
            }
            Family::ShiftedInverseSine { r, .. } => Limits {
                // f vanishes identically near zero
                at_zero: LimitBehavior::Sublinear,
                at_infinity: power_side(*r, g_sup, true),
                heuristic: false,
            },
            Family::UserTable { table } => {
                let at_zero = table_side(table, false);
                // the table extends constantly, so f(s)/s -> 0
                let at_infinity = LimitBehavior::Sublinear;
                Limits { at_zero, at_infinity, heuristic: true }
            }
        }
    }

    /// Serializes the descriptor as a plain-text key-value block, e.g.
    /// `family=sine_u, r=1.0, g=const:1.0, shift_alpha=0.0`.
    pub fn to_kv(&self) -> String {
        let mut out = format!("family={}", self.kind().as_str());
        match &self.family {
            Family::SineU { r } | Family::InverseSineU { r } | Family::Power { r } => {
                out.push_str(&format!(", r={:?}", r));
            }
            Family::ShiftedInverseSine { r, .. } => out.push_str(&format!(", r={:?}", r)),
            Family::Constant { c } => out.push_str(&format!(", c={:?}", c)),
            Family::Linear { slope } => out.push_str(&format!(", slope={:?}", slope)),
            Family::UserTable { table } => {
                let pts: Vec<String> =
                    table.knots().map(|(x, y)| format!("{:?}:{:?}", x, y)).collect();
                out.push_str(&format!(", points={}", pts.join(";")));
            }
        }
        match &self.g {
            GSpec::Const(g) => out.push_str(&format!(", g=const:{:?}", g)),
            GSpec::Table { table, infimum } => {
                let pts: Vec<String> =
                    table.knots().map(|(x, y)| format!("{:?}:{:?}", x, y)).collect();
                out.push_str(&format!(", g=table:{:?};{}", infimum, pts.join(";")));
            }
        }
        let alpha = self.shift_alpha().unwrap_or(F::zero());
        out.push_str(&format!(", shift_alpha={:?}", alpha));
        out
    }

    /// Parses a descriptor produced by [`to_kv`](Self::to_kv); keys may be
    /// separated by commas or newlines.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut family = None;
        let mut r = None;
        let mut c = None;
        let mut slope = None;
        let mut alpha = None;
        let mut g_raw = None;
        let mut points_raw = None;

        for item in text.split([',', '\n']) {
            let item = item.trim();
            if item.is_empty() || item.starts_with('#') {
                continue;
            }
            let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse {
                what: format!("expected key=value, got `{item}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "family" => family = Some(value.to_string()),
                "r" => r = Some(parse_real::<F>(value)?),
                "c" => c = Some(parse_real::<F>(value)?),
                "slope" => slope = Some(parse_real::<F>(value)?),
                "shift_alpha" => alpha = Some(parse_real::<F>(value)?),
                "g" => g_raw = Some(value.to_string()),
                "points" => points_raw = Some(value.to_string()),
                other => {
                    return Err(Error::Parse { what: format!("unknown key `{other}`") });
                }
            }
        }

        let family = family.ok_or_else(|| Error::Parse { what: "missing `family`".into() })?;
        let r = r.unwrap_or(F::zero());
        let base = match family.as_str() {
            "sine_u" => Self::sine_u(r)?,
            "inverse_sine_u" => Self::inverse_sine_u(r)?,
            "shifted_inverse_sine" => {
                let alpha = alpha.ok_or_else(|| Error::Parse {
                    what: "shifted_inverse_sine needs shift_alpha".into(),
                })?;
                Self::shifted_inverse_sine(r, alpha)?
            }
            "constant" => Self::constant(c.unwrap_or(F::one()))?,
            "linear" => Self::linear(slope.unwrap_or(F::one()))?,
            "power" => Self::power(r)?,
            "user_table" => {
                let raw = points_raw
                    .ok_or_else(|| Error::Parse { what: "user_table needs points".into() })?;
                Self::user_table(&parse_points::<F>(&raw)?)?
            }
            other => return Err(Error::Parse { what: format!("unknown family `{other}`") }),
        };

        match g_raw.as_deref() {
            None => Ok(base),
            Some(spec) => {
                if let Some(gval) = spec.strip_prefix("const:") {
                    let g = parse_real::<F>(gval)?;
                    if g == F::one() {
                        Ok(base)
                    } else {
                        base.with_gamma(g)
                    }
                } else if let Some(rest) = spec.strip_prefix("table:") {
                    let (inf_raw, pts_raw) = rest.split_once(';').ok_or_else(|| Error::Parse {
                        what: "g=table needs `inf;t:v;...`".into(),
                    })?;
                    let infimum = parse_real::<F>(inf_raw)?;
                    let pts = parse_points::<F>(pts_raw)?;
                    base.with_g(GSpec::table(&pts, infimum)?)
                } else {
                    Err(Error::Parse { what: format!("unknown g spec `{spec}`") })
                }
            }
        }
    }
}

/// `(b^p - a^p)/p` for `0 <= a <= b`, rewritten through `expm1`/`ln_1p`
/// when `a` and `b` are close so the difference keeps full precision.
fn power_diff<F: Real>(a: F, b: F, p: F) -> F {
    if a <= F::zero() {
        return b.powf(p) / p;
    }
    if b - a < b * real(0.1) {
        // b^p (1 - (a/b)^p) / p
        return -b.powf(p) * (p * (a / b).ln()).exp_m1() / p;
    }
    (b.powf(p) - a.powf(p)) / p
}

fn parse_real<F: Real>(s: &str) -> Result<F> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse { what: format!("bad number `{s}`") })?;
    F::from_f64(v).ok_or_else(|| Error::Parse { what: format!("number `{s}` not representable") })
}

fn parse_points<F: Real>(raw: &str) -> Result<Vec<(F, F)>> {
    let mut pts = Vec::new();
    for pair in raw.split(';') {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let (x, y) = pair
            .split_once(':')
            .ok_or_else(|| Error::Parse { what: format!("expected t:v, got `{pair}`") })?;
        pts.push((parse_real::<F>(x)?, parse_real::<F>(y)?));
    }
    Ok(pts)
}

fn power_side<F: Real>(r: F, m_scale: F, at_infinity: bool) -> LimitBehavior<F> {
    // f(s)/s ~ m_scale * s^(r-1)
    let one = F::one();
    if r == one {
        LimitBehavior::Linear { m: m_scale }
    } else if (r > one) == at_infinity {
        LimitBehavior::Superlinear
    } else {
        LimitBehavior::Sublinear
    }
}

fn table_side<F: Real>(table: &MonotoneCubic<F>, _at_infinity: bool) -> LimitBehavior<F> {
    // fit log(f/t) against log t on the smallest sampled decade
    let lo = table.x_min().max(real(1e-12));
    let hi = table.x_max();
    if !(hi > lo) {
        return LimitBehavior::Sublinear;
    }
    let probe_hi = (lo * real(10.0)).min(hi);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..8 {
        let t = lo * (probe_hi / lo).powf(real::<F>(i as f64 / 7.0));
        let v = table.eval(t).max(real(1e-300));
        xs.push(t.ln());
        ys.push((v / t).ln());
    }
    let (slope, _, _) = linear_fit(&xs, &ys);
    let band = real::<F>(0.1);
    if slope > band {
        LimitBehavior::Sublinear
    } else if slope < -band {
        LimitBehavior::Superlinear
    } else {
        LimitBehavior::Linear { m: (ys[0]).exp() }
    }
}

/// Behavior of `f(s)/s` at one end of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitBehavior<F> {
    /// `f(s)/s → 0`.
    Sublinear,
    /// `f(s)/s → m > 0`.
    Linear { m: F },
    /// `f(s)/s → ∞`.
    Superlinear,
    /// liminf and limsup along the zero/peak subsequences differ.
    Oscillatory { liminf: F, limsup: F },
}

/// Result of [`Nonlinearity::classify_limits`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits<F> {
    pub at_zero: LimitBehavior<F>,
    pub at_infinity: LimitBehavior<F>,
    /// Set when the classification came from sampled ratios rather than the
    /// known structure of a built-in family.
    pub heuristic: bool,
}

/// Where the zero sequence accumulates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Accumulation<F> {
    Infinity,
    Zero,
    Finite(F),
    None,
}

/// Ordered zeros `α_n` and interleaved peaks `ν_n` (where the oscillatory
/// factor equals 2) of a nonlinearity, `n = 1..n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroStructure<F> {
    zeros: Vec<F>,
    peaks: Vec<F>,
    accumulation: Accumulation<F>,
    inf_zero: F,
    sup_zero: F,
    increasing: bool,
}

impl<F: Real> ZeroStructure<F> {
    /// `α_n` (1-based).
    pub fn zero(&self, n: u32) -> Option<F> {
        self.zeros.get((n as usize).checked_sub(1)?).copied()
    }

    /// `ν_n` (1-based).
    pub fn peak(&self, n: u32) -> Option<F> {
        self.peaks.get((n as usize).checked_sub(1)?).copied()
    }

    /// The n-th inter-zero window as an ascending interval. Requires the
    /// structure to hold at least `n + 1` zeros.
    pub fn window(&self, n: u32) -> Option<(F, F)> {
        let a = self.zero(n)?;
        let b = self.zero(n + 1)?;
        Some(if self.increasing { (a, b) } else { (b, a) })
    }

    pub fn zeros(&self) -> &[F] {
        &self.zeros
    }

    pub fn peaks(&self) -> &[F] {
        &self.peaks
    }

    pub fn accumulation(&self) -> Accumulation<F> {
        self.accumulation
    }

    /// `inf Z_f` (not necessarily attained).
    pub fn inf_zero(&self) -> F {
        self.inf_zero
    }

    /// `sup Z_f`, possibly `+∞`.
    pub fn sup_zero(&self) -> F {
        self.sup_zero
    }

    /// True when the zeros increase with `n` (diverging sequence).
    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn len(&self) -> u32 {
        self.zeros.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// Sampled check that `s ↦ f(s) + m s` is nondecreasing on the open window
/// `(lo, hi)`.
///
/// With a derivative closure the minimum of `f' + m` is located on a 10^4
/// grid and refined (golden section in the interior, geometric descent at
/// the open endpoints, which resolves derivative blow-ups like `-1/(2√s)`
/// down to ~1e-18 of the window). Without one, sampled increments of
/// `f + m s` are tested directly.
pub fn monotone_with_shift<F: Real, G, D>(f: G, df: Option<D>, lo: F, hi: F, m: F) -> bool
where
    G: Fn(F) -> F,
    D: Fn(F) -> F,
{
    let n = 10_000usize;
    let width = hi - lo;
    if !(width > F::zero()) {
        return true;
    }

    match df {
        Some(d) => {
            let phi = |s: F| d(s) + m;
            let mut min_val = F::infinity();
            let mut min_idx = 0usize;
            for i in 1..=n {
                let s = lo + width * real::<F>(i as f64 / (n + 1) as f64);
                let v = phi(s);
                if v < min_val {
                    min_val = v;
                    min_idx = i;
                }
            }
            let scale = m.abs().max(min_val.abs()).max(F::one());
            let tol = -real::<F>(1e-9) * scale;
            if min_val < tol {
                return false;
            }
            // golden refinement around the sampled minimum
            let step = width / real::<F>((n + 1) as f64);
            let a = lo + step * real::<F>((min_idx.saturating_sub(1)) as f64).max(F::zero());
            let b = (lo + step * real::<F>((min_idx + 1) as f64)).min(hi);
            let (_, refined) = golden_min(phi, a, b, 48);
            if refined < tol {
                return false;
            }
            // geometric probes toward the open endpoints, where blow-ups hide
            let mut d_edge = step;
            for _ in 0..64 {
                d_edge *= real(0.5);
                if lo + d_edge > lo && phi(lo + d_edge) < tol {
                    return false;
                }
                if hi - d_edge < hi && phi(hi - d_edge) < tol {
                    return false;
                }
                if d_edge < F::epsilon() * width {
                    break;
                }
            }
            true
        }
        None => {
            let phi = |s: F| f(s) + m * s;
            let mut prev = phi(lo + width * real::<F>(1.0 / (n + 1) as f64));
            let mut scale = prev.abs().max(F::one());
            for i in 2..=n {
                let s = lo + width * real::<F>(i as f64 / (n + 1) as f64);
                let v = phi(s);
                scale = scale.max(v.abs());
                if v < prev - real::<F>(1e-9) * scale {
                    return false;
                }
                prev = v;
            }
            true
        }
    }
}
