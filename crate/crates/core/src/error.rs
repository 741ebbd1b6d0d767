use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gegenbauer parameter alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("hypergeometric parameter c = {c} makes a denominator vanish within {n} terms")]
    InvalidDenominator { c: f64, n: u32 },
    #[error("states belong to different representations or truncations")]
    RepresentationMismatch,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("invalid phase point: {0}")]
    InvalidPhasePoint(String),
    #[error("z . z deviates from 1 by {defect:e} (tolerance {tol:e})")]
    NotOnComplexSphere { defect: f64, tol: f64 },
    #[error("z3 = -1: the ladder parametrisation is singular at this label")]
    SingularLabel,
    #[error("rotation has no Gauss decomposition (upper-left SU(2) entry vanishes)")]
    SingularRotation,
    #[error("tail tolerance {0} outside (0, 0.1)")]
    InvalidTailTolerance(f64),
    #[error("j_cut = {0} is too small (need at least {1})")]
    TruncationTooSmall(u32, u32),
    #[error("adaptive truncation did not reach tail {tol:e} below j_cut = {limit}")]
    TruncationNotConverged { tol: f64, limit: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
