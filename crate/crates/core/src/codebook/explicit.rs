use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{codebook_size, InfoWord};
use crate::{Error, Result};

/// Default memory guard for explicit codebooks, in bytes of stored symbols.
pub const DEFAULT_EXPLICIT_LIMIT_BYTES: u64 = 1 << 30;

/// `M_n` words stored in info-index order, with a membership index mapping
/// each distinct word to the lowest info index that produced it.
#[derive(Clone, Debug)]
pub struct ExplicitCodebook {
    n: usize,
    alphabet: usize,
    rate: f64,
    seed: u64,
    /// Words concatenated, `n` symbols each.
    words: Vec<u8>,
    index: HashMap<Box<[u8]>, u64>,
}

impl ExplicitCodebook {
    /// Draw `⌊q^{nR}⌋` words uniformly with replacement.
    ///
    /// At `R = 1` the codebook is all of `A^n` in numeric order.
    pub fn uniform(n: usize, alphabet: usize, rate: f64, seed: u64) -> Result<Self> {
        Self::uniform_with_limit(n, alphabet, rate, seed, DEFAULT_EXPLICIT_LIMIT_BYTES)
    }

    pub fn uniform_with_limit(
        n: usize,
        alphabet: usize,
        rate: f64,
        seed: u64,
        limit_bytes: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        if !(2..=256).contains(&alphabet) {
            return Err(Error::InvalidArgument(format!("alphabet size {alphabet} not in 2..=256")));
        }
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidArgument(format!("rate {rate} not in [0, 1]")));
        }
        let m = codebook_size(n, alphabet, rate);
        let bytes = m * n as f64;
        if bytes > limit_bytes as f64 {
            return Err(Error::ExplicitTooLarge {
                words: m,
                n,
                bytes,
                limit: limit_bytes,
            });
        }
        let m = m as u64;
        let mut words = Vec::with_capacity(m as usize * n);
        if rate == 1.0 {
            let mut w = vec![0u8; n];
            for _ in 0..m {
                words.extend_from_slice(&w);
                increment(&mut w, alphabet);
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = alphabet as u16;
            for _ in 0..m as usize * n {
                words.push(rng.gen_range(0..q) as u8);
            }
        }
        Ok(Self::from_flat(n, alphabet, rate, seed, words))
    }

    /// Codebook with the given words, in info-index order.
    pub fn from_words(alphabet: usize, rate: f64, seed: u64, list: &[Vec<u8>]) -> Result<Self> {
        let n = list.first().ok_or(Error::EmptyCodebook)?.len();
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        let mut words = Vec::with_capacity(list.len() * n);
        for w in list {
            crate::word::check_length(w, n)?;
            crate::word::check_symbols(w, alphabet)?;
            words.extend_from_slice(w);
        }
        Ok(Self::from_flat(n, alphabet, rate, seed, words))
    }

    pub(crate) fn from_flat(n: usize, alphabet: usize, rate: f64, seed: u64, words: Vec<u8>) -> Self {
        let mut index = HashMap::with_capacity(words.len() / n);
        for (i, w) in words.chunks_exact(n).enumerate() {
            index.entry(w.into()).or_insert(i as u64);
        }
        ExplicitCodebook {
            n,
            alphabet,
            rate,
            seed,
            words,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of info words `M_n`, duplicates included.
    pub fn len(&self) -> u64 {
        (self.words.len() / self.n) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of distinct codewords.
    pub fn distinct(&self) -> usize {
        self.index.len()
    }

    pub fn word(&self, i: u64) -> Option<&[u8]> {
        let i = usize::try_from(i).ok()?;
        self.words.get(i * self.n..(i + 1) * self.n)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.words.chunks_exact(self.n)
    }

    pub(crate) fn flat(&self) -> &[u8] {
        &self.words
    }

    pub fn contains_unchecked(&self, word: &[u8]) -> bool {
        self.index.contains_key(word)
    }

    pub fn encode(&self, info: &InfoWord) -> Result<Vec<u8>> {
        match info {
            InfoWord::Index(i) => self
                .word(*i)
                .map(|w| w.to_vec())
                .ok_or_else(|| Error::InfoOutOfRange(format!("index {i} >= {}", self.len()))),
            InfoWord::Bits(_) => Err(Error::InfoOutOfRange(
                "explicit codebooks take an info index".into(),
            )),
        }
    }

    /// Lowest info index encoding to `word`.
    pub fn decode_to_info(&self, word: &[u8]) -> Result<u64> {
        self.index.get(word).copied().ok_or(Error::NotACodeword)
    }
}

/// Next word in numeric order, wrapping to all zeros.
fn increment(w: &mut [u8], alphabet: usize) {
    for s in w.iter_mut().rev() {
        if (*s as usize) + 1 < alphabet {
            *s += 1;
            return;
        }
        *s = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_determinism() {
        let a = ExplicitCodebook::uniform(16, 2, 0.8, 5).unwrap();
        assert_eq!(a.len(), 7131);
        let b = ExplicitCodebook::uniform(16, 2, 0.8, 5).unwrap();
        assert_eq!(a.flat(), b.flat());
        let one = ExplicitCodebook::uniform(4, 2, 0.0, 1).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn round_trip() {
        let cb = ExplicitCodebook::uniform(8, 2, 0.5, 9).unwrap();
        for i in 0..cb.len() {
            let w = cb.encode(&InfoWord::Index(i)).unwrap();
            let j = cb.decode_to_info(&w).unwrap();
            assert_eq!(cb.word(j).unwrap(), &w[..]);
            assert!(j <= i);
        }
        assert!(cb.encode(&InfoWord::Index(cb.len())).is_err());
    }

    #[test]
    fn exhaustive_membership() {
        let cb = ExplicitCodebook::uniform(8, 2, 0.5, 3).unwrap();
        let members: std::collections::HashSet<Vec<u8>> = cb.iter().map(|w| w.to_vec()).collect();
        for v in 0u32..256 {
            let w: Vec<u8> = (0..8).rev().map(|i| ((v >> i) & 1) as u8).collect();
            assert_eq!(cb.contains_unchecked(&w), members.contains(&w));
        }
    }

    #[test]
    fn duplicates_resolve_to_lowest_index() {
        let cb = ExplicitCodebook::from_words(2, 1.0, 0, &[vec![0, 1], vec![1, 1], vec![0, 1], vec![0, 0]])
            .unwrap();
        assert_eq!(cb.decode_to_info(&[0, 1]).unwrap(), 0);
        assert_eq!(cb.encode(&InfoWord::Index(2)).unwrap(), vec![0, 1]);
        assert_eq!(cb.distinct(), 3);
        // A seed that collides at n = 2, R = 1/2 (two draws from four words).
        let hit = (0..64u64)
            .map(|s| ExplicitCodebook::uniform(2, 2, 0.5, s).unwrap())
            .find(|c| c.distinct() == 1)
            .expect("some seed draws the same word twice");
        let w = hit.word(1).unwrap().to_vec();
        assert_eq!(hit.decode_to_info(&w).unwrap(), 0);
    }

    #[test]
    fn full_rate_is_whole_space() {
        let cb = ExplicitCodebook::uniform(3, 3, 1.0, 0).unwrap();
        assert_eq!(cb.len(), 27);
        assert_eq!(cb.distinct(), 27);
        assert_eq!(cb.word(5).unwrap(), &[0, 1, 2]);
    }

    #[test]
    fn guard() {
        let err = ExplicitCodebook::uniform(64, 2, 0.9, 0).unwrap_err();
        assert!(matches!(err, Error::ExplicitTooLarge { .. }));
        assert!(ExplicitCodebook::uniform_with_limit(10, 2, 0.5, 0, 100).is_err());
    }
}
