use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension n={n}: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("index {index} out of range for n={n}")]
    InvalidIndex { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("index range violation: {0}")]
    Range(String),

    #[error(
        "critical resonance at delta={delta}: component ({k},{s}) cannot reach ({l},{t}) \
         (zero divisor with nonzero right-hand side)"
    )]
    CriticalResonance { k: u32, s: u32, l: u32, t: u32, delta: Rational },

    #[error("delta={delta} is a second-order resonance")]
    SecondOrderResonance { delta: Rational },

    #[error("jet order {have} is below the required {need}")]
    JetOrder { have: u32, need: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for resonance obstructions (CLI exit code 2).
    pub fn is_resonance(&self) -> bool {
        matches!(self, Error::CriticalResonance { .. } | Error::SecondOrderResonance { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
