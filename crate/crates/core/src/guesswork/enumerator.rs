use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::classes::{sorted_classes, ClassGroup, ClassId, ProbClass};
use crate::noise::{iid_key, markov_key, NoiseModel};
use crate::{Error, Result};

/// One emitted noise sequence with its base-`|A|` log-probability.
#[derive(Clone, Debug, PartialEq)]
pub struct Guess {
    pub sequence: Vec<u8>,
    pub log_prob: f64,
}

/// Generator of `A^n` in guessing order: non-increasing probability, ties in
/// ascending numeric order.
///
/// IID noise walks the probability classes (types) in key order and lists
/// each group of equal-probability classes by merging their members in
/// lexicographic order. Markov noise uses a best-first search over prefixes,
/// which is valid because extending a prefix never raises its probability;
/// the frontier grows by at most `|A|` entries per expansion, which bounds
/// the usable depth of enumeration to desk scale.
pub struct GuessEnumerator {
    n: usize,
    ln_alphabet: f64,
    emitted: u64,
    buf: Vec<u8>,
    state: State,
}

enum State {
    Classes(ClassWalk),
    BestFirst(BestFirst),
}

impl GuessEnumerator {
    pub fn new(model: &NoiseModel, n: usize) -> Result<Self> {
        if model.is_markov() {
            Self::best_first(model, n)
        } else {
            Self::with_state(model, n, State::Classes(ClassWalk::new(model, n)))
        }
    }

    /// Best-first prefix search regardless of the model kind.
    pub fn best_first(model: &NoiseModel, n: usize) -> Result<Self> {
        Self::with_state(model, n, State::BestFirst(BestFirst::new(model, n)))
    }

    fn with_state(model: &NoiseModel, n: usize, state: State) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        Ok(GuessEnumerator {
            n,
            ln_alphabet: model.ln_alphabet(),
            emitted: 0,
            buf: Vec::with_capacity(n),
            state,
        })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    /// Number of sequences emitted so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Advance to the next sequence, returning a view of it and its
    /// base-`|A|` log-probability; `None` once all of `A^n` has been emitted.
    pub fn next_ref(&mut self) -> Option<(&[u8], f64)> {
        let key = match &mut self.state {
            State::Classes(w) => w.next_into(&mut self.buf)?,
            State::BestFirst(b) => b.next_into(&mut self.buf)?,
        };
        self.emitted += 1;
        Some((&self.buf, key / self.ln_alphabet))
    }

    pub fn next_guess(&mut self) -> Option<Guess> {
        self.next_ref().map(|(z, log_prob)| Guess {
            sequence: z.to_vec(),
            log_prob,
        })
    }
}

impl Iterator for GuessEnumerator {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        self.next_guess()
    }
}

struct ClassWalk {
    classes: Vec<ProbClass>,
    groups: Vec<ClassGroup>,
    group: usize,
    /// Members of the current group not yet emitted, smallest first.
    pending: BinaryHeap<Reverse<Vec<u8>>>,
}

impl ClassWalk {
    fn new(model: &NoiseModel, n: usize) -> Self {
        let (classes, groups) = sorted_classes(model, n);
        let mut walk = ClassWalk {
            classes,
            groups,
            group: 0,
            pending: BinaryHeap::new(),
        };
        walk.load_group();
        walk
    }

    fn load_group(&mut self) {
        if let Some(g) = self.groups.get(self.group) {
            for c in &self.classes[g.start..g.end] {
                if let ClassId::Iid(counts) = &c.id {
                    let first: Vec<u8> = counts
                        .iter()
                        .enumerate()
                        .flat_map(|(s, &k)| std::iter::repeat_n(s as u8, k as usize))
                        .collect();
                    self.pending.push(Reverse(first));
                }
            }
        }
    }

    fn next_into(&mut self, out: &mut Vec<u8>) -> Option<f64> {
        while self.pending.is_empty() {
            self.group += 1;
            if self.group >= self.groups.len() {
                return None;
            }
            self.load_group();
        }
        let key = self.groups[self.group].key;
        let Reverse(mut seq) = self.pending.pop().unwrap();
        out.clear();
        out.extend_from_slice(&seq);
        if next_permutation(&mut seq) {
            self.pending.push(Reverse(seq));
        }
        Some(key)
    }
}

/// Rearrange into the next lexicographic permutation of the multiset.
fn next_permutation(a: &mut [u8]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&x| x > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

struct Node {
    key: f64,
    prefix: Vec<u8>,
    /// Symbol counts (IID) or transition counts `[n00, n01, n10, n11]`.
    stats: Vec<u32>,
}

impl Node {
    /// Compare the smallest completions (prefix padded with zeros).
    fn padded_cmp(&self, other: &Node) -> Ordering {
        let len = self.prefix.len().max(other.prefix.len());
        for i in 0..len {
            let a = self.prefix.get(i).copied().unwrap_or(0);
            let b = other.prefix.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.prefix.len().cmp(&other.prefix.len())
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: higher key first, then smaller padded value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.padded_cmp(self))
    }
}

struct BestFirst {
    n: usize,
    model: NoiseModel,
    frontier: BinaryHeap<Node>,
}

impl BestFirst {
    fn new(model: &NoiseModel, n: usize) -> Self {
        let stats = if model.is_markov() {
            vec![0; 4]
        } else {
            vec![0; model.alphabet_size()]
        };
        let mut frontier = BinaryHeap::new();
        frontier.push(Node {
            key: 0.0,
            prefix: Vec::new(),
            stats,
        });
        BestFirst {
            n,
            model: model.clone(),
            frontier,
        }
    }

    fn child(&self, parent: &Node, s: u8) -> Node {
        let mut prefix = Vec::with_capacity(self.n);
        prefix.extend_from_slice(&parent.prefix);
        prefix.push(s);
        let mut stats = parent.stats.clone();
        let key = match self.model.markov_logs() {
            None => {
                stats[s as usize] += 1;
                iid_key(self.model.ln_pmf(), &stats)
            }
            Some(logs) => {
                if let Some(&prev) = parent.prefix.last() {
                    stats[(prev * 2 + s) as usize] += 1;
                }
                let t = [stats[0], stats[1], stats[2], stats[3]];
                markov_key(logs, prefix[0], &t)
            }
        };
        Node { key, prefix, stats }
    }

    fn next_into(&mut self, out: &mut Vec<u8>) -> Option<f64> {
        loop {
            let node = self.frontier.pop()?;
            if node.prefix.len() == self.n {
                out.clear();
                out.extend_from_slice(&node.prefix);
                return Some(node.key);
            }
            for s in 0..self.model.alphabet_size() as u8 {
                let child = self.child(&node, s);
                self.frontier.push(child);
            }
        }
    }
}
