//! Error type shared by every module.

use alloc::string::String;

use crate::quadrature::Estimate;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("datum fails axiom `{axiom}`: {detail}")]
    DatumInvalid { axiom: &'static str, detail: String },
    #[error("vector is not a root of the datum")]
    NotARoot,
    #[error("group order exceeds the cap of {cap}")]
    GroupTooLarge { cap: usize },
    #[error("Weyl dimension is not an integer (residual {residual:e})")]
    NonIntegralDimension { residual: f64 },
    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),
    #[error("no positive system contains the given R+(k)")]
    IncompatibleSystem,
    #[error("{what} = {value:e} lies inside the tolerance band (tau, 10 tau)")]
    ToleranceAmbiguity { what: &'static str, value: f64 },
    #[error("subdivision budget exhausted; best estimate {best:?}")]
    MaxSubdivisions { best: Estimate },
    #[error("Monte Carlo acceptance {rate:e} is below 1e-3")]
    LowAcceptance { rate: f64 },
    #[error("least-squares system is ill conditioned (condition {cond:e})")]
    IllConditioned { cond: f64 },
    #[error("integrand is not integrable: {0}")]
    IntegrabilityViolated(String),
    #[error("requires dim a = 0 and an interior (regular) shifted weight")]
    NotEqualRankRegular,
    #[error("requires the equal-rank regular (discrete series) case")]
    NotDiscreteSeriesCase,
    #[error("standing assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("{theorem} fails at Weyl element #{w}: {detail}")]
    TheoremViolation {
        theorem: &'static str,
        w: usize,
        detail: String,
    },
    #[error("no built-in datum named `{0}`")]
    UnknownName(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
