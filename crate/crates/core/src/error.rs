use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown subsystem `{0}`")]
    UnknownSubsystem(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not a projector (deviation {deviation:.3e})")]
    NotAProjector { deviation: f64 },

    #[error("projection did not herald (probability {prob:.3e})")]
    NoHerald { prob: f64 },

    #[error("channel is not trace preserving (completeness deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("`{name}` out of range: {value} ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("ambiguous A2 branch: two eigenspaces overlap equally with the ideal state")]
    AmbiguousBranch,

    #[error("missing measurement basis {0}")]
    MissingBasis(&'static str),

    #[error("input set does not span the operator space (rank deficient)")]
    RankDeficient,

    #[error("empty grid")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks `lo <= value <= hi` and reports the parameter name on failure.
pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    expected: &'static str,
) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::OutOfRange {
            name,
            value,
            expected,
        });
    }
    Ok(())
}
