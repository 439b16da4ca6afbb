use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: truncated spaces need at least one basis vector")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("guard {guard} leaves no leading block in dimension {dim}")]
    GuardTooLarge { guard: usize, dim: usize },

    #[error("operator has non-finite entries")]
    NonFinite,

    #[error("declared bandwidth {declared} but entry ({row}, {col}) is nonzero")]
    BandwidthViolation {
        declared: usize,
        row: usize,
        col: usize,
    },

    #[error(
        "operator is singular or ill-conditioned (condition number {condition:e}, cap {cap:e})"
    )]
    IllConditioned { condition: f64, cap: f64 },

    #[error("invalid ECSusy constants: need delta > gamma, got gamma = {gamma}, delta = {delta}")]
    InvalidConstants { gamma: f64, delta: f64 },

    #[error("kernel of {operator} is empty at the requested tolerance")]
    EmptyKernel { operator: &'static str },

    #[error("kernel of {operator} has dimension {dimension}, expected exactly one vacuum")]
    DegenerateKernel {
        operator: &'static str,
        dimension: usize,
    },

    #[error("vacua pairing <phi0, psi0> = {0:e} is numerically zero")]
    VanishingPairing(f64),

    #[error("requested {requested} ladder steps but truncation allows at most {limit}")]
    FamilyTooLong { requested: usize, limit: usize },

    #[error("vector is not an eigenvector of {operator} (relative residual {residual:e})")]
    NotEigenvector {
        operator: &'static str,
        residual: f64,
    },

    #[error("family vectors are linearly dependent (rank deficiency)")]
    RankDeficient,

    #[error("grid does not resolve index {n_max} with shift {shift}")]
    UnderResolved { n_max: usize, shift: f64 },

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("radicand too large to canonicalize by trial division")]
    Canonicalization,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
