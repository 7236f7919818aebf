//! Probability classes: sets of sequences sharing the sufficient statistics
//! that determine their probability.
//!
//! IID noise: the symbol-count vector (type). Binary Markov noise: the first
//! symbol plus the four transition counts `[n00, n01, n10, n11]`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::noise::{iid_key, markov_key, NoiseModel};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum ClassId {
    Iid(Vec<u32>),
    Markov { first: u8, t: [u32; 4] },
}

#[derive(Clone, Debug)]
pub(crate) struct ProbClass {
    pub key: f64,
    pub id: ClassId,
}

/// A maximal run of classes with identical probability key.
#[derive(Clone, Debug)]
pub(crate) struct ClassGroup {
    pub key: f64,
    pub start: usize,
    pub end: usize,
}

/// Descending key order; `-inf` (zero-probability) classes sort last.
pub(crate) fn by_key_desc(a: f64, b: f64) -> Ordering {
    b.total_cmp(&a)
}

pub(crate) fn class_of(model: &NoiseModel, z: &[u8]) -> ClassId {
    match model.markov_logs() {
        None => {
            let mut counts = vec![0u32; model.alphabet_size()];
            for &s in z {
                counts[s as usize] += 1;
            }
            ClassId::Iid(counts)
        }
        Some(_) => {
            let mut t = [0u32; 4];
            for w in z.windows(2) {
                t[(w[0] * 2 + w[1]) as usize] += 1;
            }
            ClassId::Markov { first: z[0], t }
        }
    }
}

pub(crate) fn class_key(model: &NoiseModel, id: &ClassId) -> f64 {
    match id {
        ClassId::Iid(counts) => iid_key(model.ln_pmf(), counts),
        ClassId::Markov { first, t } => markov_key(model.markov_logs().unwrap(), *first, t),
    }
}

/// Every non-empty class for length `n`, sorted by descending key, and the
/// groups of equal key.
pub(crate) fn sorted_classes(model: &NoiseModel, n: usize) -> (Vec<ProbClass>, Vec<ClassGroup>) {
    let ids = match model.markov_logs() {
        None => iid_classes(model.alphabet_size(), n),
        Some(_) => markov_classes(n),
    };
    let mut classes: Vec<ProbClass> = ids
        .into_iter()
        .map(|id| ProbClass {
            key: class_key(model, &id),
            id,
        })
        .collect();
    classes.sort_by(|a, b| by_key_desc(a.key, b.key));
    let mut groups: Vec<ClassGroup> = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.key == c.key || (g.key.is_nan() && c.key.is_nan()) => g.end = i + 1,
            _ => groups.push(ClassGroup {
                key: c.key,
                start: i,
                end: i + 1,
            }),
        }
    }
    (classes, groups)
}

fn iid_classes(q: usize, n: usize) -> Vec<ClassId> {
    fn rec(q: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ClassId>) {
        if prefix.len() == q - 1 {
            prefix.push(left);
            out.push(ClassId::Iid(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            rec(q, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, n as u32, &mut Vec::with_capacity(q), &mut out);
    out
}

fn markov_classes(n: usize) -> Vec<ClassId> {
    let transitions = n as u32 - 1;
    let mut out = Vec::new();
    for first in 0..2u8 {
        for r in 0..=transitions {
            let (up, down) = if first == 0 {
                (r.div_ceil(2), r / 2)
            } else {
                (r / 2, r.div_ceil(2))
            };
            for n11 in 0..=(transitions - r) {
                let t = [transitions - r - n11, up, down, n11];
                if !markov_paths_is_zero(first, &t) {
                    out.push(ClassId::Markov { first, t });
                }
            }
        }
    }
    out
}

fn markov_paths_is_zero(first: u8, t: &[u32; 4]) -> bool {
    let [n00, n01, n10, n11] = *t;
    if first == 0 {
        !(n01 == n10 || n01 == n10 + 1) || (n01 == 0 && n11 > 0)
    } else {
        !(n10 == n01 || n10 == n01 + 1) || (n10 == 0 && n00 > 0)
    }
}

/// Counting helper over a shared factorial table.
pub(crate) struct Counter {
    fact: Vec<BigUint>,
}

impl Counter {
    pub fn new(n: usize) -> Self {
        Counter {
            fact: crate::bigutil::factorials(n + 1),
        }
    }

    pub fn binomial(&self, a: u32, b: u32) -> BigUint {
        if b > a {
            return BigUint::zero();
        }
        let (a, b) = (a as usize, b as usize);
        &self.fact[a] / (&self.fact[b] * &self.fact[a - b])
    }

    /// `m! / Π r_i!` with `m = Σ r_i`.
    pub fn multinomial(&self, rem: &[u32]) -> BigUint {
        let m: u32 = rem.iter().sum();
        let den = rem
            .iter()
            .fold(BigUint::one(), |acc, &r| acc * &self.fact[r as usize]);
        &self.fact[m as usize] / den
    }

    /// Number of binary strings starting with `first` whose transition
    /// counts are exactly `t = [n00, n01, n10, n11]`.
    ///
    /// Such a string is an alternation of runs. Starting with 0 there are
    /// `n10 + 1` zero-runs and `n01` one-runs; the self-transitions are
    /// distributed freely among the runs of each symbol.
    pub fn markov_paths(&self, first: u8, t: &[u32; 4]) -> BigUint {
        if markov_paths_is_zero(first, t) {
            return BigUint::zero();
        }
        let [n00, n01, n10, n11] = *t;
        // Ways to split `selfs` self-transitions over `runs` runs.
        let spread = |selfs: u32, runs: u32| -> BigUint {
            if runs == 0 {
                BigUint::from((selfs == 0) as u32)
            } else {
                self.binomial(selfs + runs - 1, runs - 1)
            }
        };
        if first == 0 {
            spread(n00, n10 + 1) * spread(n11, n01)
        } else {
            spread(n11, n01 + 1) * spread(n00, n10)
        }
    }

    pub fn class_size(&self, id: &ClassId) -> BigUint {
        match id {
            ClassId::Iid(counts) => self.multinomial(counts),
            ClassId::Markov { first, t } => self.markov_paths(*first, t),
        }
    }

    /// Number of members of class `id` that are numerically smaller than `z`.
    pub fn count_less(&self, id: &ClassId, z: &[u8]) -> BigUint {
        match id {
            ClassId::Iid(counts) => self.iid_count_less(counts, z),
            ClassId::Markov { first, t } => self.markov_count_less(*first, t, z),
        }
    }

    fn iid_count_less(&self, counts: &[u32], z: &[u8]) -> BigUint {
        let mut rem = counts.to_vec();
        let mut acc = BigUint::zero();
        for &zi in z {
            for s in 0..zi as usize {
                if rem[s] > 0 {
                    rem[s] -= 1;
                    acc += self.multinomial(&rem);
                    rem[s] += 1;
                }
            }
            let zi = zi as usize;
            if rem[zi] == 0 {
                break;
            }
            rem[zi] -= 1;
        }
        acc
    }

    fn markov_count_less(&self, first: u8, t: &[u32; 4], z: &[u8]) -> BigUint {
        let mut acc = BigUint::zero();
        let mut used = [0u32; 4];
        let fits = |u: &[u32; 4]| u.iter().zip(t).all(|(a, b)| a <= b);
        let minus = |u: &[u32; 4]| [t[0] - u[0], t[1] - u[1], t[2] - u[2], t[3] - u[3]];
        for (i, &zi) in z.iter().enumerate() {
            if zi == 1 {
                if i == 0 {
                    if first == 0 {
                        acc += self.markov_paths(0, t);
                    }
                } else {
                    let mut alt = used;
                    alt[(z[i - 1] * 2) as usize] += 1;
                    if fits(&alt) {
                        acc += self.markov_paths(0, &minus(&alt));
                    }
                }
            }
            if i == 0 {
                if zi != first {
                    break;
                }
            } else {
                used[(z[i - 1] * 2 + zi) as usize] += 1;
                if !fits(&used) {
                    break;
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markov_class_sizes_partition_the_space() {
        for n in 1..=10usize {
            let counter = Counter::new(n);
            let total: BigUint = markov_classes(n)
                .iter()
                .map(|id| counter.class_size(id))
                .sum();
            assert_eq!(total, BigUint::one() << n, "n = {n}");
        }
    }

    #[test]
    fn markov_class_sizes_match_brute_force() {
        let n = 9;
        let counter = Counter::new(n);
        let mut tally = std::collections::HashMap::new();
        for v in 0u32..(1 << n) {
            let z: Vec<u8> = (0..n).rev().map(|i| ((v >> i) & 1) as u8).collect();
            let model = NoiseModel::markov(0.3, 0.4).unwrap();
            *tally.entry(class_of(&model, &z)).or_insert(0u32) += 1;
        }
        for (id, count) in tally {
            assert_eq!(counter.class_size(&id), BigUint::from(count), "{id:?}");
        }
    }

    #[test]
    fn iid_classes_count_types() {
        // C(n + q - 1, q - 1) types.
        assert_eq!(iid_classes(2, 10).len(), 11);
        assert_eq!(iid_classes(3, 6).len(), 28);
    }
}
