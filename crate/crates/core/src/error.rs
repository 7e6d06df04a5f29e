use thiserror::Error;

/// Errors raised by grid construction, operators, identities and norms.
///
/// Every variant maps to a stable short code through [`Error::code`], which
/// the CLI and JSON reports use so that scripts can match on failures without
/// parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("{0}")]
    Precondition(String),
    #[error("truncation-unsafe: |f| at the outer 1% of nodes is {edge:.3e}, above 1e-8 x max|f| = {max:.3e}")]
    TruncationUnsafe { edge: f64, max: f64 },
    #[error("gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("gamma overflows at {0}")]
    GammaOverflow(f64),
    #[error("missing boundary value: endpoint node {node} is excluded and no override was given")]
    MissingBoundaryValue { node: usize },
    #[error(
        "unstable endpoint extrapolation: estimates {first:.6e} and {second:.6e} differ by more than 1e-3 relative"
    )]
    UnstableExtrapolation { first: f64, second: f64 },
    #[error("imaginary residue {0:.3e} exceeds 1e-8 relative; the window is inadequate")]
    ImaginaryResidue(f64),
    #[error("alpha*p = {0} must be below 1")]
    AlphaPTooLarge(f64),
    #[error("alpha*p = {0} must exceed 1")]
    AlphaPTooSmall(f64),
    #[error("integrability exponent mu = {mu} must exceed p/(1-alpha*p) = {bound}")]
    MuTooSmall { mu: f64, bound: f64 },
    #[error("support is not compact: |u| reaches {0:.3e} (relative) on the outer 5% of nodes")]
    SupportNotCompact(f64),
    #[error("band correction needs p(1-sigma) > 0, got {0}")]
    BandCorrection(f64),
    #[error("evaluation point {0} lies inside the support")]
    InsideSupport(f64),
    #[error("point {0} lies outside the domain")]
    OutsideDomain(f64),
    #[error("I/O: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "E_GRID",
            Error::InvalidSamples(_) => "E_SAMPLES",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::TruncationUnsafe { .. } => "E_TRUNCATION",
            Error::GammaPole(_) => "E_GAMMA_POLE",
            Error::GammaOverflow(_) => "E_GAMMA_OVERFLOW",
            Error::MissingBoundaryValue { .. } => "E_BOUNDARY",
            Error::UnstableExtrapolation { .. } => "E_EXTRAPOLATION",
            Error::ImaginaryResidue(_) => "E_IMAG_RESIDUE",
            Error::AlphaPTooLarge(_) => "E_ALPHA_P_GE_1",
            Error::AlphaPTooSmall(_) => "E_ALPHA_P_LE_1",
            Error::MuTooSmall { .. } => "E_MU_TOO_SMALL",
            Error::SupportNotCompact(_) => "E_SUPPORT",
            Error::BandCorrection(_) => "E_BAND",
            Error::InsideSupport(_) => "E_INSIDE_SUPPORT",
            Error::OutsideDomain(_) => "E_OUTSIDE_DOMAIN",
            Error::Io(_) => "E_IO",
            Error::Parse(_) => "E_PARSE",
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
