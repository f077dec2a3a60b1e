use thiserror::Error;

pub type Result<T> = std::result::Result<T, VhError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VhError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("insufficient points: need at least {k}, got {n}")]
    InsufficientPoints { n: usize, k: usize },

    /// Residual norms collapsed before all K vertices were picked.
    #[error("degenerate rank: every residual vanished at step {step}")]
    DegenerateRank { step: usize },

    #[error("singular configuration: {quantity} = {value:e} is numerically zero")]
    SingularConfiguration { quantity: &'static str, value: f64 },

    #[error("hyperplane projection needs d >= K-1 (d = {d}, K = {k})")]
    ProjectionNotApplicable { d: usize, k: usize },

    #[error("invalid neighborhood radius {0}; it must be finite and > 0")]
    InvalidDelta(f64),

    #[error("every point was pruned (N = {n_min}, delta = {delta})")]
    AllPointsPruned { n_min: usize, delta: f64 },

    #[error("only {retained} points retained, need K = {k} (N = {n_min}, delta = {delta})")]
    TooFewRetained {
        retained: usize,
        k: usize,
        n_min: usize,
        delta: f64,
    },

    #[error("vertex {vertex} has no pure-node observation")]
    MissingPureNode { vertex: usize },
}

impl VhError {
    /// Stable kebab-case name, used by the CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            VhError::InvalidInput(_) => "invalid-input",
            VhError::DimensionMismatch { .. } => "dimension-mismatch",
            VhError::InsufficientPoints { .. } => "insufficient-points",
            VhError::DegenerateRank { .. } => "degenerate-rank",
            VhError::SingularConfiguration { .. } => "singular-configuration",
            VhError::ProjectionNotApplicable { .. } => "projection-not-applicable",
            VhError::InvalidDelta(_) => "invalid-delta",
            VhError::AllPointsPruned { .. } => "all-points-pruned",
            VhError::TooFewRetained { .. } => "too-few-retained",
            VhError::MissingPureNode { .. } => "missing-pure-node",
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        match self {
            VhError::TooFewRetained { .. } | VhError::AllPointsPruned { .. } => {
                Some("lower the minimum neighbor count N or raise delta")
            }
            VhError::DegenerateRank { .. } => {
                Some("the points span fewer than K affinely independent directions; lower K")
            }
            VhError::InvalidDelta(_) => Some("pass an explicit positive --delta"),
            VhError::SingularConfiguration { .. } => {
                Some("the vertex matrix is (numerically) rank deficient")
            }
            VhError::MissingPureNode { .. } => {
                Some("beta_new needs at least one observation generated at every vertex")
            }
            _ => None,
        }
    }
}
