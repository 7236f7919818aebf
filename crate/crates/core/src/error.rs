use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid noise model: {0}")]
    InvalidModel(String),

    #[error("Rényi order alpha = 1 is the Shannon limit; use shannon_entropy_rate")]
    RenyiAtOne,

    #[error("invalid Rényi order {0}; alpha must be positive")]
    InvalidRenyiOrder(f64),

    #[error("empty sequence")]
    EmptySequence,

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u8, alphabet: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "explicit codebook of {words} words at n = {n} needs about {bytes} bytes, \
         over the {limit} byte guard; use linear or race mode"
    )]
    ExplicitTooLarge {
        words: f64,
        n: usize,
        bytes: f64,
        limit: u64,
    },

    #[error("word is not a codeword")]
    NotACodeword,

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("info word out of range: {0}")]
    InfoOutOfRange(String),

    #[error("abandonment exponent {exponent_bits:.3} bits exceeds the cap of {cap_bits} bits")]
    ExponentCap { exponent_bits: f64, cap_bits: u32 },

    #[error("target exponent {target} is outside the range of the rate function (max {max})")]
    UnattainableTarget { target: f64, max: f64 },

    #[error("optimization failed at x = {x}: {reason}")]
    Optimization { x: f64, reason: String },

    #[error("linear codebooks are binary only (alphabet size {0})")]
    NonBinaryLinear(usize),

    #[error("generator matrix has rank {rank} < k = {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed codebook file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
