//! Exponent fits and regime classification for `λ_n` sequences.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};
use crate::search::linear_fit;
use crate::timemap::LambdaSequence;

/// Least-squares slope of `log λ_n` against `log n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit<F> {
    pub slope: F,
    pub stderr: F,
    pub n_range: (u32, u32),
    pub points_used: usize,
}

/// Large-n regime of a minimal-parameter sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `λ_n → ∞`: no unbounded set of bifurcation points arises.
    NoBifurcation,
    /// `λ_n` stays in a positive band: bifurcation points fill a half-line
    /// above a threshold.
    IntervalFromThreshold,
    /// `λ_n → 0`: every positive parameter is a bifurcation point.
    AllPositiveLambda,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NoBifurcation => "no_bifurcation",
            Regime::IntervalFromThreshold => "interval_from_threshold",
            Regime::AllPositiveLambda => "all_positive_lambda",
        }
    }
}

/// Which end of the norm axis the windows march toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Vanishing zeros: norms shrink, bifurcation from zero.
    FromZero,
    /// Diverging zeros: norms grow, bifurcation from infinity.
    FromInfinity,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::FromZero => "from_zero",
            Side::FromInfinity => "from_infinity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationClassification<F> {
    pub regime: Regime,
    pub side: Side,
    /// Tail minimum, standing in for the (only existentially known)
    /// threshold in the banded regime.
    pub threshold_estimate: Option<F>,
    pub slope: F,
}

/// Fits `log λ_n` vs `log n` over entries with `n >= n0`; failed entries
/// are skipped.
pub fn fit_exponent<F: Real>(seq: &LambdaSequence<F>, n0: u32) -> Result<ExponentFit<F>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lo = u32::MAX;
    let mut hi = 0;
    for (&n, e) in &seq.entries {
        if n >= n0 && e.lambda > F::zero() && e.lambda.is_finite() {
            xs.push(real::<F>(n as f64).ln());
            ys.push(e.lambda.ln());
            lo = lo.min(n);
            hi = hi.max(n);
        }
    }
    if xs.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: xs.len() });
    }
    let (slope, _, stderr) = linear_fit(&xs, &ys);
    Ok(ExponentFit { slope, stderr, n_range: (lo, hi), points_used: xs.len() })
}

/// Slope thresholds separating the three regimes.
const SLOPE_BAND: f64 = 0.2;
/// Max/min spread tolerated in the banded regime's tail.
const BAND_SPREAD: f64 = 10.0;

/// Classifies the large-n regime from the fitted slope plus a boundedness
/// diagnostic on the tail. Needs at least 20 usable entries; reports
/// [`Error::Inconclusive`] when the diagnostics disagree instead of
/// guessing.
pub fn classify<F: Real>(seq: &LambdaSequence<F>, side: Side) -> Result<BifurcationClassification<F>> {
    let usable: Vec<(u32, F)> = seq
        .entries
        .iter()
        .filter(|(_, e)| e.lambda > F::zero() && e.lambda.is_finite())
        .map(|(&n, e)| (n, e.lambda))
        .collect();
    if usable.len() < 20 {
        return Err(Error::TooFewPoints { needed: 20, got: usable.len() });
    }

    // skip the first quarter: transients from the smallest windows
    let skip = usable.len() / 4;
    let tail = &usable[skip..];
    let n0 = tail[0].0;
    let fit = fit_exponent(seq, n0)?;
    let slope = fit.slope;
    let band = real::<F>(SLOPE_BAND);

    if slope > band {
        return Ok(BifurcationClassification { regime: Regime::NoBifurcation, side, threshold_estimate: None, slope });
    }
    if slope < -band {
        return Ok(BifurcationClassification { regime: Regime::AllPositiveLambda, side, threshold_estimate: None, slope });
    }

    let half = &usable[usable.len() / 2..];
    let mut lo = F::infinity();
    let mut hi = F::zero();
    for &(_, l) in half {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    if hi / lo > real(BAND_SPREAD) {
        return Err(Error::Inconclusive {
            why: format!(
                "slope {} suggests a bounded band but the tail spreads {}x",
                as_f64(slope),
                as_f64(hi / lo)
            ),
        });
    }
    let quarter = &usable[usable.len() - usable.len() / 4..];
    let mut threshold = F::infinity();
    for &(_, l) in quarter {
        threshold = threshold.min(l);
    }
    Ok(BifurcationClassification {
        regime: Regime::IntervalFromThreshold,
        side,
        threshold_estimate: Some(threshold),
        slope,
    })
}

/// True when the tail minimum over the last quarter of entries exceeds ten
/// times the first entry — the divergence signature of zero sequences
/// accumulating at a positive level.
pub fn divergence_check<F: Real>(seq: &LambdaSequence<F>) -> bool {
    let usable: Vec<F> = seq
        .entries
        .values()
        .filter(|e| e.lambda.is_finite())
        .map(|e| e.lambda)
        .collect();
    if usable.len() < 4 {
        return false;
    }
    let first = usable[0];
    let quarter = &usable[usable.len() - usable.len() / 4..];
    let mut tail_min = F::infinity();
    for &l in quarter {
        tail_min = tail_min.min(l);
    }
    tail_min > real::<F>(10.0) * first
}
