use thiserror::Error;

/// Validation failures for series construction and search parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("time series value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("time series has {len} points, need at least 2")]
    SeriesTooShort { len: usize },
    #[error("window length {s} exceeds series length {n_tot}")]
    WindowTooLong { s: usize, n_tot: usize },
    #[error("window length {s} is below the minimum of 4")]
    WindowTooShort { s: usize },
    #[error("window length {s} is not divisible by {p} PAA segments")]
    SegmentsDoNotDivide { p: usize, s: usize },
    #[error("alphabet size {a} is outside the supported range 2..=20")]
    AlphabetOutOfRange { a: usize },
    #[error("discord count {k} is outside 1..={max} for this series and window")]
    DiscordCountOutOfRange { k: usize, max: usize },
}
