//! Bifurcation analysis of `-Δu = λ f(u)` with oscillatory nonnegative
//! nonlinearities, at desk scale.
//!
//! The crate computes, for the model families `f(t) = t^r (1 + sin t) g(t)`
//! and `f(t) = t^r (1 + sin(1/t)) g(t)`:
//!
//! * exact one-dimensional bifurcation branches on an interval `(0, L)` via
//!   the time map `λ(ν) = 2 f̂(ν)²/L²`, where
//!   `f̂(ν) = ∫_0^ν ds/√(F(ν)-F(s))` ([`quadrature::fhat`]);
//! * the minimal-parameter sequence `λ_n` per inter-zero window and its
//!   growth exponent ([`timemap`], [`asymptotics`]);
//! * radial upper bounds `λ̄_n` from an annulus reduction for `N >= 2`
//!   ([`radial`]);
//! * the quantitative estimates behind those sequences: window averages
//!   `h_n` with their infima and the `(π+2)ν^{r+2}` oscillatory integral
//!   bound ([`quadrature`]).
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pick the default
//! precision the documented tolerances assume.
//!
//! ```
//! use oscbif_core::{nonlinearity::Nonlinearity, timemap};
//!
//! // first window of f(t) = 1 + sin t on (0, 1): the branch minimum is the
//! // smallest parameter admitting a solution with sup-norm in (3π/2, 7π/2)
//! let nl = Nonlinearity::sine_u(0.0).unwrap();
//! let br = timemap::branch(&nl, 1.0, 1, 33).unwrap();
//! assert!(br.lambda_min > 0.0);
//! // two solutions at any parameter above the minimum
//! let sols = timemap::solutions_at_lambda(&br, 2.0 * br.lambda_min).unwrap();
//! assert!(sols.len() >= 2);
//! ```

// `!(x > 0)` deliberately rejects NaN alongside nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
mod error;
pub mod nonlinearity;
pub mod quadrature;
pub mod radial;
pub mod scalar;
mod search;
pub mod shooting;
pub mod timemap;

pub use error::{Error, Result};
pub use nonlinearity::{FamilyKind, GSpec, Nonlinearity, ZeroStructure};
pub use quadrature::{fhat, oscillatory_integral, QuadratureResult};
pub use scalar::Real;

/// Default-precision aliases.
pub type Nonlinearity64 = nonlinearity::Nonlinearity<f64>;
pub type ZeroStructure64 = nonlinearity::ZeroStructure<f64>;
pub type QuadratureResult64 = quadrature::QuadratureResult<f64>;
pub type BifurcationBranch64 = timemap::BifurcationBranch<f64>;
pub type LambdaSequence64 = timemap::LambdaSequence<f64>;
pub type ExponentFit64 = asymptotics::ExponentFit<f64>;

/// Single-precision aliases (coarse; the documented tolerances assume `f64`).
pub type Nonlinearity32 = nonlinearity::Nonlinearity<f32>;
pub type ZeroStructure32 = nonlinearity::ZeroStructure<f32>;
