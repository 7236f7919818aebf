use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::classes::{by_key_desc, class_key, class_of, sorted_classes, ClassGroup, Counter, ProbClass};
use crate::noise::NoiseModel;
use crate::word::check_symbols;
use crate::{Error, Result};

/// Exact positions in the guessing order, computed from probability-class
/// sizes rather than by enumerating predecessors.
///
/// Construction sorts the `O(n^{|A|-1})` IID types or `O(n^2)` Markov
/// classes once; each query is then a binary search plus a digit walk over
/// the classes tied with the query.
pub struct GuessRanker {
    model: NoiseModel,
    n: usize,
    counter: Counter,
    classes: Vec<ProbClass>,
    groups: Vec<ClassGroup>,
    /// `before[g]`: number of sequences in groups `0..g`.
    before: Vec<BigUint>,
}

impl GuessRanker {
    pub fn new(model: &NoiseModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        let counter = Counter::new(n);
        let (classes, groups) = sorted_classes(model, n);
        let mut before = Vec::with_capacity(groups.len() + 1);
        let mut acc = BigUint::zero();
        for g in &groups {
            before.push(acc.clone());
            for c in &classes[g.start..g.end] {
                acc += counter.class_size(&c.id);
            }
        }
        before.push(acc);
        Ok(GuessRanker {
            model: model.clone(),
            n,
            counter,
            classes,
            groups,
            before,
        })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    /// Total number of sequences ranked, `|A|^n`.
    pub fn space_size(&self) -> &BigUint {
        self.before.last().unwrap()
    }

    /// 1-based rank of `z`.
    pub fn rank(&self, z: &[u8]) -> Result<BigUint> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        check_symbols(z, self.model.alphabet_size())?;
        let key = class_key(&self.model, &class_of(&self.model, z));
        let g = self
            .groups
            .binary_search_by(|g| by_key_desc(g.key, key))
            .expect("every sequence belongs to a listed class");
        let group = &self.groups[g];
        let mut rank = self.before[g].clone() + BigUint::one();
        for c in &self.classes[group.start..group.end] {
            rank += self.counter.count_less(&c.id, z);
        }
        Ok(rank)
    }
}

/// One-shot rank of `z` under `model`; see [`GuessRanker`] for repeated
/// queries at a fixed length.
pub fn guess_rank(model: &NoiseModel, z: &[u8]) -> Result<BigUint> {
    if z.is_empty() {
        return Err(Error::EmptySequence);
    }
    GuessRanker::new(model, z.len())?.rank(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guesswork::GuessEnumerator;

    fn digits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn bsc_examples() {
        let m = NoiseModel::bsc(0.1).unwrap();
        assert_eq!(guess_rank(&m, &digits("0000")).unwrap(), BigUint::one());
        assert_eq!(guess_rank(&m, &digits("0100")).unwrap(), BigUint::from(4u32));
        assert_eq!(guess_rank(&m, &digits("1111")).unwrap(), BigUint::from(16u32));
    }

    fn check_against_enumeration(model: &NoiseModel, n: usize) {
        let ranker = GuessRanker::new(model, n).unwrap();
        let mut e = GuessEnumerator::new(model, n).unwrap();
        let mut pos = 0u64;
        while let Some((z, _)) = e.next_ref() {
            pos += 1;
            assert_eq!(ranker.rank(z).unwrap(), BigUint::from(pos), "{} z={z:?}", model.describe());
        }
        assert_eq!(ranker.space_size(), &BigUint::from(pos));
    }

    #[test]
    fn ranks_match_enumeration() {
        check_against_enumeration(&NoiseModel::bsc(0.1).unwrap(), 12);
        check_against_enumeration(&NoiseModel::bsc(0.5).unwrap(), 8);
        check_against_enumeration(&NoiseModel::bsc(0.8).unwrap(), 8);
        check_against_enumeration(&NoiseModel::iid(vec![0.5, 0.3, 0.2]).unwrap(), 6);
        check_against_enumeration(&NoiseModel::markov(0.1, 0.4).unwrap(), 12);
        check_against_enumeration(&NoiseModel::markov(0.5, 0.5).unwrap(), 8);
        check_against_enumeration(&NoiseModel::markov(0.7, 0.9).unwrap(), 10);
    }

    #[test]
    fn rejects_bad_input() {
        let m = NoiseModel::bsc(0.1).unwrap();
        assert!(guess_rank(&m, &[]).is_err());
        assert!(guess_rank(&m, &[0, 2]).is_err());
        let r = GuessRanker::new(&m, 3).unwrap();
        assert!(r.rank(&[0, 1]).is_err());
    }

    #[test]
    fn large_block_rank_is_layer_boundary() {
        let n = 700;
        let m = NoiseModel::bsc(0.01).unwrap();
        let mut z = vec![0u8; n];
        for zi in z.iter_mut().take(3) {
            *zi = 1;
        }
        // Largest weight-3 word: rank l_3.
        let l = crate::guesswork::cumulative_binomial_layers(n);
        assert_eq!(guess_rank(&m, &z).unwrap(), l[4].clone());
    }
}
