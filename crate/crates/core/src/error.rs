//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible over integers")]
    NotInvertible,
    #[error("degree bound violated at k = {0}")]
    DegreeBoundViolated(i64),
    #[error("degree bound is not monotone at k = {0}")]
    BoundNotMonotone(i64),
    #[error("mirror requires exact polynomial")]
    MirrorNeedsExact,
    #[error("divergent Pochhammer")]
    DivergentPochhammer,
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    JacobiModulus(i64),
    #[error("exact division failed: {0}")]
    InexactDivision(String),
    #[error("transform integrality violated at index {0}")]
    TransformIntegrality(usize),
    #[error("LBC required")]
    LbcRequired,
    #[error("theta route requires LBC-grade input (index {0})")]
    ThetaRouteInput(usize),
    #[error("enlarge J: {0}")]
    WindowTooSmall(String),
    #[error("divergent or undecidable for these parameters: {0}")]
    Divergent(String),
    #[error("fractional exponent did not cancel")]
    FractionalExponent,
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("closed form inconsistent for `{0}` at index {1}")]
    ClosedFormInconsistent(String, usize),
    #[error("index {0} beyond provided data")]
    IndexBeyondData(usize),
    #[error("knot file schema violation: {0}")]
    Schema(String),
    #[error("non-integral exponent at k = {0}")]
    NonIntegralExponent(i64),
    #[error("cyclic composite through `{0}`")]
    CyclicComposite(String),
    #[error("unsupported convention: {0}")]
    UnsupportedConvention(String),
    #[error("insufficient precision: need at least {suggested} bits")]
    InsufficientBits { suggested: usize },
    #[error("numerical instability: {0}")]
    Unstable(String),
    #[error("aperiodic on window up to n = {0}")]
    Aperiodic(usize),
    #[error("not enough points: need {need}, have {have}")]
    NotEnoughPoints { need: usize, have: usize },
    #[error("constant coefficient must be 1")]
    LeadingNotOne,
    #[error("non-integer coefficient at index {0}")]
    NonInteger(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotInvertible => "not_invertible",
            Error::DegreeBoundViolated(_) => "degree_bound_violated",
            Error::BoundNotMonotone(_) => "bound_not_monotone",
            Error::MirrorNeedsExact => "mirror_needs_exact",
            Error::DivergentPochhammer => "divergent_pochhammer",
            Error::JacobiModulus(_) => "jacobi_modulus",
            Error::InexactDivision(_) => "inexact_division",
            Error::TransformIntegrality(_) => "transform_integrality",
            Error::LbcRequired => "lbc_required",
            Error::ThetaRouteInput(_) => "theta_route_input",
            Error::WindowTooSmall(_) => "window_too_small",
            Error::Divergent(_) => "divergent",
            Error::FractionalExponent => "fractional_exponent",
            Error::UnknownKnot(_) => "unknown_knot",
            Error::ClosedFormInconsistent(..) => "closed_form_inconsistent",
            Error::IndexBeyondData(_) => "index_beyond_data",
            Error::Schema(_) => "schema",
            Error::NonIntegralExponent(_) => "non_integral_exponent",
            Error::CyclicComposite(_) => "cyclic_composite",
            Error::UnsupportedConvention(_) => "unsupported_convention",
            Error::InsufficientBits { .. } => "insufficient_bits",
            Error::Unstable(_) => "unstable",
            Error::Aperiodic(_) => "aperiodic",
            Error::NotEnoughPoints { .. } => "not_enough_points",
            Error::LeadingNotOne => "leading_not_one",
            Error::NonInteger(_) => "non_integer",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
