use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InfoWord;
use crate::{Error, Result};

/// Row of GF(2) entries packed 64 to a word; bit `j` is column `j`.
pub(crate) type BitRow = Vec<u64>;

fn blocks(n: usize) -> usize {
    n.div_ceil(64)
}

fn get(row: &[u64], j: usize) -> u8 {
    ((row[j / 64] >> (j % 64)) & 1) as u8
}

fn flip(row: &mut [u64], j: usize) {
    row[j / 64] ^= 1 << (j % 64);
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub(crate) fn pack(bits: &[u8]) -> BitRow {
    let mut row = vec![0u64; blocks(bits.len())];
    for (j, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            flip(&mut row, j);
        }
    }
    row
}

pub(crate) fn unpack(row: &[u64], n: usize) -> Vec<u8> {
    (0..n).map(|j| get(row, j)).collect()
}

/// Binary linear code given by a full-rank `k × n` generator `G`.
///
/// Encoding is `u·G`. Membership is a zero syndrome against a parity check
/// `H` with `G·Hᵀ = 0`. Decoding to the info word reads the pivot columns of
/// the reduced row echelon form `G' = T·G`: a codeword `c = u·G` has
/// `c|pivots = u·T⁻¹`, so `u = c|pivots · T`.
#[derive(Clone, Debug)]
pub struct LinearCodebook {
    n: usize,
    k: usize,
    seed: u64,
    generator: Vec<BitRow>,
    parity: Vec<BitRow>,
    pivots: Vec<usize>,
    /// Rows of `T`, `k` bits each.
    transform: Vec<BitRow>,
}

impl LinearCodebook {
    /// Random code with systematic generator `[I_k | P]`, `P` uniform.
    pub fn random_systematic(n: usize, k: usize, seed: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                (0..n)
                    .map(|j| if j < k { (i == j) as u8 } else { rng.gen::<bool>() as u8 })
                    .collect()
            })
            .collect();
        let mut code = Self::from_generator(&rows)?;
        code.seed = seed;
        Ok(code)
    }

    /// Code generated by the given rows, which must be linearly independent.
    pub fn from_generator(rows: &[Vec<u8>]) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().ok_or(Error::EmptyCodebook)?.len();
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        for r in rows {
            crate::word::check_length(r, n)?;
            crate::word::check_symbols(r, 2)?;
        }
        let generator: Vec<BitRow> = rows.iter().map(|r| pack(r)).collect();

        // Reduce a copy of G, tracking the row operations in T.
        let mut reduced = generator.clone();
        let mut transform: Vec<BitRow> = (0..k)
            .map(|i| {
                let mut t = vec![0u64; blocks(k)];
                flip(&mut t, i);
                t
            })
            .collect();
        let mut pivots = Vec::with_capacity(k);
        let mut r = 0;
        for col in 0..n {
            if r == k {
                break;
            }
            let Some(p) = (r..k).find(|&i| get(&reduced[i], col) == 1) else {
                continue;
            };
            reduced.swap(r, p);
            transform.swap(r, p);
            for i in 0..k {
                if i != r && get(&reduced[i], col) == 1 {
                    let (src, t_src) = (reduced[r].clone(), transform[r].clone());
                    xor_into(&mut reduced[i], &src);
                    xor_into(&mut transform[i], &t_src);
                }
            }
            pivots.push(col);
            r += 1;
        }
        if r < k {
            return Err(Error::RankDeficient { rank: r, k });
        }

        // One parity row per free column j: e_j plus column j of G' on the
        // pivots.
        let mut parity = Vec::with_capacity(n - k);
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for j in (0..n).filter(|&j| !is_pivot[j]) {
            let mut h = vec![0u64; blocks(n)];
            flip(&mut h, j);
            for (i, &p) in pivots.iter().enumerate() {
                if get(&reduced[i], j) == 1 {
                    flip(&mut h, p);
                }
            }
            parity.push(h);
        }

        Ok(LinearCodebook {
            n,
            k,
            seed: 0,
            generator,
            parity,
            pivots,
            transform,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub(crate) fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    pub fn generator_rows(&self) -> Vec<Vec<u8>> {
        self.generator.iter().map(|r| unpack(r, self.n)).collect()
    }

    pub fn parity_check_rows(&self) -> Vec<Vec<u8>> {
        self.parity.iter().map(|r| unpack(r, self.n)).collect()
    }

    /// `H·wᵀ` for a packed word.
    fn syndrome_is_zero(&self, w: &[u64]) -> bool {
        self.parity.iter().all(|h| {
            h.iter()
                .zip(w)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1
                == 0
        })
    }

    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        let w = pack(word);
        self.parity
            .iter()
            .map(|h| (h.iter().zip(&w).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1) as u8)
            .collect()
    }

    pub fn contains_unchecked(&self, word: &[u8]) -> bool {
        word.iter().all(|&b| b < 2) && self.syndrome_is_zero(&pack(word))
    }

    pub fn encode(&self, info: &InfoWord) -> Result<Vec<u8>> {
        let bits = match info {
            InfoWord::Bits(b) => {
                crate::word::check_length(b, self.k)?;
                crate::word::check_symbols(b, 2)?;
                b.clone()
            }
            InfoWord::Index(i) => {
                if self.k < 64 && *i >> self.k != 0 {
                    return Err(Error::InfoOutOfRange(format!("index {i} needs more than {} bits", self.k)));
                }
                (0..self.k)
                    .rev()
                    .map(|s| if s < 64 { ((i >> s) & 1) as u8 } else { 0 })
                    .collect()
            }
        };
        Ok(self.encode_bits(&bits))
    }

    pub fn encode_bits(&self, bits: &[u8]) -> Vec<u8> {
        let mut c = vec![0u64; blocks(self.n)];
        for (row, &b) in self.generator.iter().zip(bits) {
            if b == 1 {
                xor_into(&mut c, row);
            }
        }
        unpack(&c, self.n)
    }

    pub fn decode_to_info(&self, word: &[u8]) -> Result<Vec<u8>> {
        if !self.contains_unchecked(word) {
            return Err(Error::NotACodeword);
        }
        let mut u = vec![0u64; blocks(self.k)];
        for (&p, t) in self.pivots.iter().zip(&self.transform) {
            if word[p] == 1 {
                xor_into(&mut u, t);
            }
        }
        Ok(unpack(&u, self.k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> LinearCodebook {
        let rows = [
            "1000110", "0100011", "0010111", "0001101",
        ];
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
        LinearCodebook::from_generator(&rows).unwrap()
    }

    fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..(1 << n)).map(move |v| (0..n).rev().map(|i| ((v >> i) & 1) as u8).collect())
    }

    #[test]
    fn generator_is_orthogonal_to_parity_check() {
        for (n, k, seed) in [(7, 4, 1), (75, 54, 2), (130, 65, 3), (20, 20, 4)] {
            let code = LinearCodebook::random_systematic(n, k, seed).unwrap();
            for g in code.generator_rows() {
                assert!(code.contains_unchecked(&g));
                assert!(code.syndrome(&g).iter().all(|&s| s == 0));
            }
            assert_eq!(code.parity_check_rows().len(), n - k);
        }
    }

    #[test]
    fn hamming_membership_is_exact() {
        let code = hamming();
        let members: std::collections::HashSet<Vec<u8>> =
            all_words(4).map(|u| code.encode_bits(&u)).collect();
        assert_eq!(members.len(), 16);
        let accepted: Vec<Vec<u8>> = all_words(7).filter(|w| code.contains_unchecked(w)).collect();
        assert_eq!(accepted.len(), 16);
        assert!(accepted.iter().all(|w| members.contains(w)));
        // Minimum distance 3: any single flip leaves the code.
        for c in &members {
            for j in 0..7 {
                let mut w = c.clone();
                w[j] ^= 1;
                assert!(!code.contains_unchecked(&w));
            }
        }
    }

    #[test]
    fn round_trip_through_non_systematic_generator() {
        let rows: Vec<Vec<u8>> = vec![
            vec![1, 1, 0, 1, 0, 0, 1],
            vec![0, 1, 1, 0, 1, 0, 1],
            vec![1, 0, 1, 1, 1, 1, 0],
        ];
        let code = LinearCodebook::from_generator(&rows).unwrap();
        for u in all_words(3) {
            let c = code.encode(&InfoWord::Bits(u.clone())).unwrap();
            assert_eq!(code.decode_to_info(&c).unwrap(), u);
        }
        let mut bad = code.encode_bits(&[1, 0, 0]);
        bad[0] ^= 1;
        assert!(matches!(code.decode_to_info(&bad), Err(Error::NotACodeword)));
    }

    #[test]
    fn full_rate_accepts_everything() {
        let code = LinearCodebook::random_systematic(6, 6, 0).unwrap();
        assert!(all_words(6).all(|w| code.contains_unchecked(&w)));
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let rows = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]];
        assert!(matches!(
            LinearCodebook::from_generator(&rows),
            Err(Error::RankDeficient { rank: 2, k: 3 })
        ));
    }

    #[test]
    fn index_info_words() {
        let code = hamming();
        assert_eq!(code.encode(&InfoWord::Index(0b1000)).unwrap(), vec![1, 0, 0, 0, 1, 1, 0]);
        assert!(code.encode(&InfoWord::Index(16)).is_err());
    }
}
