//! Codebooks and the law of the first non-transmitted codeword hit.
//!
//! [`ExplicitCodebook`] stores `M_n = ⌊|A|^{nR}⌋` words drawn uniformly with
//! replacement; [`LinearCodebook`] is a binary linear code tested for
//! membership through its syndrome. [`UHitModel`] describes the guess index
//! at which GRAND first meets a codeword other than the transmitted one,
//! which lets simulations skip materializing the codebook.

mod explicit;
mod io;
mod linear;
mod uhit;

pub use explicit::{ExplicitCodebook, DEFAULT_EXPLICIT_LIMIT_BYTES};
pub use io::{load_codebook, read_codebook, save_codebook, write_codebook};
pub use linear::LinearCodebook;
pub use uhit::UHitModel;

use crate::word::check_length;
use crate::Result;

/// Exponent `nR`, snapped to the nearest integer when within `1e-9` so that
/// rates such as `k/n` give exact sizes.
pub fn size_exponent(n: usize, rate: f64) -> f64 {
    let e = n as f64 * rate;
    if (e - e.round()).abs() < 1e-9 {
        e.round()
    } else {
        e
    }
}

/// `M_n = ⌊q^{nR}⌋` as a float (exact up to `2^53`).
pub fn codebook_size(n: usize, alphabet: usize, rate: f64) -> f64 {
    let e = size_exponent(n, rate);
    if e == e.round() {
        if let Some(m) = (alphabet as u64).checked_pow(e as u32) {
            return m as f64;
        }
    }
    (e * (alphabet as f64).log2()).exp2().floor()
}

/// An information word: an index into an explicit codebook, or the `k`
/// information bits of a linear code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfoWord {
    Index(u64),
    Bits(Vec<u8>),
}

#[derive(Clone, Debug)]
pub enum Codebook {
    Explicit(ExplicitCodebook),
    Linear(LinearCodebook),
}

impl Codebook {
    pub fn n(&self) -> usize {
        match self {
            Codebook::Explicit(c) => c.n(),
            Codebook::Linear(c) => c.n(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            Codebook::Explicit(c) => c.alphabet_size(),
            Codebook::Linear(_) => 2,
        }
    }

    pub fn rate(&self) -> f64 {
        match self {
            Codebook::Explicit(c) => c.rate(),
            Codebook::Linear(c) => c.rate(),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Codebook::Explicit(c) => c.seed(),
            Codebook::Linear(c) => c.seed(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Codebook::Explicit(c) => c.len() == 0,
            Codebook::Linear(_) => false,
        }
    }

    pub fn contains(&self, word: &[u8]) -> Result<bool> {
        check_length(word, self.n())?;
        Ok(self.contains_unchecked(word))
    }

    /// Membership without the length check; `word` must have length `n`.
    pub fn contains_unchecked(&self, word: &[u8]) -> bool {
        match self {
            Codebook::Explicit(c) => c.contains_unchecked(word),
            Codebook::Linear(c) => c.contains_unchecked(word),
        }
    }

    pub fn encode(&self, info: &InfoWord) -> Result<Vec<u8>> {
        match self {
            Codebook::Explicit(c) => c.encode(info),
            Codebook::Linear(c) => c.encode(info),
        }
    }

    pub fn decode_to_info(&self, word: &[u8]) -> Result<InfoWord> {
        check_length(word, self.n())?;
        match self {
            Codebook::Explicit(c) => c.decode_to_info(word).map(InfoWord::Index),
            Codebook::Linear(c) => c.decode_to_info(word).map(InfoWord::Bits),
        }
    }
}

impl From<ExplicitCodebook> for Codebook {
    fn from(c: ExplicitCodebook) -> Self {
        Codebook::Explicit(c)
    }
}

impl From<LinearCodebook> for Codebook {
    fn from(c: LinearCodebook) -> Self {
        Codebook::Linear(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(codebook_size(16, 2, 0.8), 7131.0);
        assert_eq!(codebook_size(4, 2, 0.0), 1.0);
        assert_eq!(codebook_size(75, 2, 0.72), (1u64 << 54) as f64);
        assert_eq!(codebook_size(10, 3, 0.5), 243.0);
        assert_eq!(size_exponent(7, 4.0 / 7.0), 4.0);
    }
}
