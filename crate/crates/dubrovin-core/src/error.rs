use thiserror::Error;

/// Errors shared across the exact and numeric layers.
#[derive(Debug, Error)]
pub enum DubrovinError {
    #[error("variable table mismatch: {0}")]
    VarTableMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("polynomial is inhomogeneous under the given weights")]
    Inhomogeneous,
    #[error("invalid exponent split: {0}")]
    BadExponentSplit(String),
    #[error("curve construction: {0}")]
    BadCurve(String),
    #[error("division by zero element of the function field")]
    DivisionByZero,
    #[error("empty numerator list for holomorphic basis")]
    EmptyBasis,
    #[error("basis element is not of the h/f_y form; clear_denominators needs that structure")]
    ResidualDenominator,
    #[error("group element must have a != 0")]
    SingularGroupElement,
    #[error("orbit equations need a point with U != 0")]
    ZeroUCoordinate,
    #[error("matrix is singular or too ill-conditioned (cond ~ {0:.3e})")]
    IllConditioned(f64),
    #[error("implicitization matrix exceeds the cap: {rows} x {cols} = {entries} entries (cap {cap})")]
    MatrixTooLarge {
        rows: usize,
        cols: usize,
        entries: usize,
        cap: usize,
    },
    #[error("no solution in the given trailing space")]
    NoTrailingSolution,
    #[error("riemann matrix: {0}")]
    BadRiemannMatrix(String),
    #[error("theta truncation could not reach tolerance {tol:.3e} within radius {radius}")]
    TruncationFailure { tol: f64, radius: f64 },
    #[error("directional derivatives are supported up to total order 4, got {0}")]
    DerivativeOrderTooHigh(usize),
    #[error("least-squares system for (c, d) is rank deficient")]
    RankDeficientFit,
    #[error("unexpected solution dimension {got}, expected {expected}")]
    UnexpectedDimension { got: usize, expected: usize },
    #[error("empty exponential-sum support")]
    EmptySupport,
    #[error("theta candidate does not vanish on the parametrization (residual has {0} terms)")]
    NonvanishingTheta(usize),
    #[error("component is not rational/linear in the affine chart: {0}")]
    BadComponent(String),
    #[error("tau function vanishes at the requested point")]
    SingularTau,
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}
