use thiserror::Error;

/// Failure modes of series arithmetic and the extrapolation methods.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("series constant term must be 1")]
    NonUnitConstant,
    #[error("series of order {have} is too short, order {need} required")]
    InsufficientOrder { need: usize, have: usize },
    #[error("complex branch: {0}")]
    ComplexBranch(String),
    #[error("degenerate moment system")]
    DegenerateMoments,
    #[error("no real solution: {0}")]
    NoRealSolution(String),
    #[error("non-positive factor base A = {0}")]
    NegativeBase(f64),
    #[error("evaluation outside the domain at x = {x}")]
    DomainError { x: f64, level: Option<usize> },
    #[error("gamma = beta - alpha is zero")]
    ZeroGamma,
    #[error("nested tower is non-positive at level {level}")]
    NegativeTower { level: usize },
    #[error("correction function has no finite limit")]
    NoFiniteLimit,
    #[error("velocity vanishes at phi = {at}")]
    VelocityZeroCrossing { at: f64 },
    #[error("inversion outside domain at phi = {phi}")]
    InversionDomain { phi: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("singular Pade system")]
    SingularPadeSystem,
    #[error("non-positive Pade ratio r = {0}")]
    NegativeRatio(f64),
    #[error("{file}:{line}: {msg}")]
    ParseError { file: String, line: usize, msg: String },
    #[error("case {id}: {msg}")]
    InvariantViolation { id: String, msg: String },
    #[error("unknown function id `{0}`")]
    UnknownFunction(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine tag, distinct per variant.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::ZeroLeadingCoefficient => "zero-leading-coefficient",
            Error::NonUnitConstant => "non-unit-constant",
            Error::InsufficientOrder { .. } => "insufficient-order",
            Error::ComplexBranch(_) => "complex-branch",
            Error::DegenerateMoments => "degenerate-moments",
            Error::NoRealSolution(_) => "no-real-solution",
            Error::NegativeBase(_) => "negative-base",
            Error::DomainError { .. } => "domain-error",
            Error::ZeroGamma => "zero-gamma",
            Error::NegativeTower { .. } => "negative-tower",
            Error::NoFiniteLimit => "no-finite-limit",
            Error::VelocityZeroCrossing { .. } => "velocity-zero-crossing",
            Error::InversionDomain { .. } => "inversion-domain",
            Error::QuadratureFailure(_) => "quadrature-failure",
            Error::SingularPadeSystem => "singular-pade-system",
            Error::NegativeRatio(_) => "negative-ratio",
            Error::ParseError { .. } => "parse-error",
            Error::InvariantViolation { .. } => "invariant-violation",
            Error::UnknownFunction(_) => "unknown-function",
            Error::PrecisionLoss(_) => "precision-loss",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }

    /// True when the failure means the approximant does not exist as a real
    /// function, as opposed to a numerical or usage problem.
    pub fn is_complex(&self) -> bool {
        matches!(
            self,
            Error::ComplexBranch(_)
                | Error::NegativeBase(_)
                | Error::NegativeTower { .. }
                | Error::NegativeRatio(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
