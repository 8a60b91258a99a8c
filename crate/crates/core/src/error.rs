use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not hyperbolic (|trace| = {abs_trace})")]
    NotHyperbolic { abs_trace: f64 },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: f64 },
    #[error("unsupported genus {0}: only the genus-2 octagon model is available")]
    UnsupportedGenus(u32),
    #[error("genus {0} carries no hyperbolic structure")]
    BadGenus(u32),
    #[error("cutoff too large: {0}")]
    CutoffTooLarge(String),
    #[error("R = {r} exceeds the spectrum cutoff {cutoff}")]
    BeyondCutoff { r: f64, cutoff: f64 },
    #[error("representation violates the surface relation (residual {0:e})")]
    RelationViolated(f64),
    #[error("representation image {index} is singular (|det| = {det:e})")]
    Singular { index: usize, det: f64 },
    #[error("bad representation: {0}")]
    BadRepresentation(String),
    #[error("empty length spectrum")]
    EmptySpectrum,
    #[error("Re(s) = {re_s} is not above the convergence abscissa {abscissa}")]
    OutsideHalfPlane { re_s: f64, abscissa: f64 },
    #[error("t must be positive (got {0})")]
    BadT(f64),
    #[error("cutoff {cutoff} is insufficient at t = {t}; need L >= {required}")]
    CutoffInsufficient { t: f64, cutoff: f64, required: f64 },
    #[error("path endpoint {endpoint} lies within {distance:e} of the pole at {pole}")]
    EndpointAtPole { endpoint: String, pole: f64, distance: f64 },
    #[error("eps must lie in (0, 0.2] (got {0})")]
    BadEps(f64),
    #[error("word of length {0} exceeds the 64-letter cap")]
    WordTooLong(usize),
    #[error("axis walk failed: {0}")]
    WalkFailed(String),
    #[error("duplicate class in spectrum: {0}")]
    DuplicateClass(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
