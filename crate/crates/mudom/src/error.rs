use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MudomError {
    #[error("denominator vanishes (|d| = {0:e})")]
    DenominatorVanishes(f64),
    #[error("resolvent is singular (|det| = {0:e})")]
    SingularResolvent(f64),
    #[error("fiber base triple lies outside the closed tetrablock (margin {0:e})")]
    FiberBaseOutside(f64),
    #[error("invalid principal-minor index pair ({0}, {1})")]
    InvalidIndexPair(usize, usize),
    #[error("parameter outside its domain: {0}")]
    DomainViolation(String),
    #[error("target point is not outside the closed domain")]
    TargetNotOutside,
    #[error("separation could not be certified: {0}")]
    SeparationNotCertified(String),
    #[error("homotopy leaves the closed domain at s = {s}, t = {t}")]
    PathLeavesGamma { s: f64, t: f64 },
    #[error("target point is not in the open domain (margin {0:e})")]
    TargetNotInG(f64),
    #[error("lambda0 must satisfy 0 < |lambda0| < 1, got modulus {0}")]
    Lambda0OutOfRange(f64),
    #[error("interpolation nodes are not pairwise distinct")]
    DuplicateNodes,
    #[error("length mismatch: {0} nodes, {1} values")]
    LengthMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MudomError>;
