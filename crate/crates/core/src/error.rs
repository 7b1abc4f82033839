use thiserror::Error;

/// Errors raised anywhere in the laboratory pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The working precision was insufficient (non-converged quadrature,
    /// non-positive Hankel pivot, ...). Callers may retry with more bits.
    #[error("precision exhausted at {bits} bits: {reason}")]
    PrecisionExhausted { bits: u32, reason: String },

    /// Two values produced under different precision contexts were combined.
    #[error("precision context mismatch: {left} bits vs {right} bits")]
    ContextMismatch { left: u32, right: u32 },

    /// An index was requested beyond the range a table was built for.
    #[error("{what}: index {index} outside 0..={max}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    /// An internal invariant did not hold; indicates a bug or corrupted input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// An expansion was evaluated without supplying the fitted constants it needs.
    #[error("expansion requires fitted constant {0}")]
    UnfittedConstant(&'static str),

    /// A fit or solve received data that does not determine a unique answer.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn exhausted(bits: u32, reason: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            bits,
            reason: reason.into(),
        }
    }

    pub fn is_precision_exhausted(&self) -> bool {
        matches!(self, Error::PrecisionExhausted { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
