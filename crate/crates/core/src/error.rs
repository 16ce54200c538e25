use thiserror::Error;

use crate::mpoly::Var;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("both polynomials are constant in {0}")]
    BothConstantInV(Var),
    #[error("polynomial is constant in {0}")]
    ConstantInV(Var),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("linear map is singular")]
    SingularMap,
    #[error("no generic shear found after {0} attempts")]
    GenericityFailed(usize),
    #[error("vertical line component at {0}")]
    VerticalLineComponent(String),
    #[error("surface contains a plane normal to the {0}-axis")]
    PlanarComponentInAxis(Var),
    #[error("normalization failed after {0} attempts")]
    NormalizationFailed(usize),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("connectivity hypotheses unreachable after {0} transforms")]
    HypothesesUnreachable(usize),
    #[error("F_x vanished along the path at {0:?}")]
    FxVanished([f64; 3]),
    #[error("step budget exceeded after {0} steps")]
    StepBudgetExceeded(usize),
    #[error("correction line misses the level curve")]
    NoIntersection,
    #[error("projections disagree: {0}")]
    ProjectionAmbiguous(String),
    #[error("parse error at {pos}: expected {expected}")]
    ParseError { pos: usize, expected: String },
    #[error("io error: {0}")]
    IoError(String),
}

impl Error {
    /// Stable machine-readable name used in JSON reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BothConstantInV(_) => "BothConstantInV",
            Error::ConstantInV(_) => "ConstantInV",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::SingularMap => "SingularMap",
            Error::GenericityFailed(_) => "GenericityFailed",
            Error::VerticalLineComponent(_) => "VerticalLineComponent",
            Error::PlanarComponentInAxis(_) => "PlanarComponentInAxis",
            Error::NormalizationFailed(_) => "NormalizationFailed",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::HypothesesUnreachable(_) => "HypothesesUnreachable",
            Error::FxVanished(_) => "FxVanished",
            Error::StepBudgetExceeded(_) => "StepBudgetExceeded",
            Error::NoIntersection => "NoIntersection",
            Error::ProjectionAmbiguous(_) => "ProjectionAmbiguous",
            Error::ParseError { .. } => "ParseError",
            Error::IoError(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
