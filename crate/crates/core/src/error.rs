use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("width n_{index} is zero")]
    WidthZero { index: usize },

    #[error("activation degree d_{index} = {degree} is below 2")]
    DegreeBelowTwo { index: usize, degree: u32 },

    #[error("{widths} widths require {expected} activation degrees, got {got}")]
    LengthMismatch { widths: usize, expected: usize, got: usize },

    #[error("weight matrix W_{layer} has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    ShapeMismatch { layer: usize, rows: usize, cols: usize, got_rows: usize, got_cols: usize },

    #[error("gauge mask row {row} of W_{layer} must fix exactly one entry, fixes {fixed}")]
    InvalidGauge { layer: usize, row: usize, fixed: usize },

    #[error("pivot coefficient of output {output} vanishes at the sample point")]
    PivotVanishes { output: usize },

    #[error("sampling exhausted: {failures} consecutive pivot failures")]
    SamplingExhausted { failures: usize },

    #[error("point assigns {got} values, expected {expected}")]
    PointArity { expected: usize, got: usize },

    #[error("architecture needs a single output (n_L = 1), has {outputs}")]
    NotSingleOutput { outputs: usize },

    #[error("architecture needs at least two layers for this operation")]
    TooShallow,

    #[error("ambient dimension {coords} exceeds the cap {cap}")]
    AmbientTooLarge { coords: u128, cap: u128 },

    #[error("forms {first} and {second} are proportional")]
    ProportionalPair { first: usize, second: usize },

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: &'static str },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
