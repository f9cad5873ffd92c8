use thiserror::Error;

/// Errors shared across the crate. Numeric payloads are stored as `f64`
/// regardless of the working scalar type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative argument t = {t}; nonlinearities are defined on t >= 0")]
    NegativeArgument { t: f64 },

    #[error("family `{family}` has no countable zero set")]
    FamilyWithoutZeros { family: &'static str },

    #[error("f({nu}) = 0: the endpoint quadrature and the time map are singular at this peak")]
    SingularAtPeak { nu: f64 },

    #[error("F(nu) - F(s) <= 0 at s = {s}: f vanishes identically between s and the peak")]
    NonpositiveGap { s: f64 },

    #[error("sample s = {s} must lie strictly below the peak nu = {nu}")]
    SampleAbovePeak { s: f64, nu: f64 },

    #[error("exponent r = {r} rejected: {what}")]
    ExponentOutOfRange { r: f64, what: &'static str },

    #[error("space dimension N = {n} too low; the annulus reduction needs N >= 2")]
    DimensionTooLow { n: u32 },

    #[error("quadrature did not reach the requested tolerance (requested {requested:e}, achieved {achieved:e})")]
    ToleranceNotReached { requested: f64, achieved: f64 },

    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("branch is flat in lambda; solution multiplicity is undefined")]
    DegenerateBranch,

    #[error("f(s)/s is unbounded near zero; no nonexistence threshold exists")]
    UnboundedSlopeAtZero,

    #[error("classification diagnostics conflict: {why}")]
    Inconclusive { why: String },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error("descriptor parse error: {what}")]
    Parse { what: String },
}

pub type Result<T> = core::result::Result<T, Error>;
