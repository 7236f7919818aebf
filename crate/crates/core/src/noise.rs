//! Noise laws: IID over a finite alphabet, and binary two-state Markov.
//!
//! Entropy rates are reported in logarithms base `|A|`. Internally every
//! rate is derived from the spectral radius `ρ(β)` of the β-tilted law
//! (`Σ p_i^β` for IID noise, the Perron root of `[P_ij^β]` for Markov
//! noise), so that Rényi rates, the guesswork cumulant generating function
//! and its derivative share a single numerically stable evaluation.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::word::check_symbols;
use crate::{Error, Result};

const PMF_TOLERANCE: f64 = 1e-12;

/// Initial law of a Markov noise chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum InitialDistribution {
    Stationary,
    Explicit([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum NoiseKind {
    /// Independent symbols drawn from `pmf` over `{0, …, pmf.len()-1}`.
    Iid { pmf: Vec<f64> },
    /// Binary chain with transition matrix `[[1-a, a], [b, 1-b]]`.
    BinaryMarkov {
        a: f64,
        b: f64,
        initial: InitialDistribution,
    },
}

/// Natural logs of the Markov law, in the order used for probability keys.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct MarkovLogs {
    pub initial: [f64; 2],
    /// `[ln P00, ln P01, ln P10, ln P11]`.
    pub transition: [f64; 4],
}

/// Spectral radius of the β-tilted law, split as
/// `log ρ(β) = β·log_max + log_rest` (base `|A|`).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Tilt {
    pub log_max: f64,
    pub log_rest: f64,
    /// `d/dβ log_rest`.
    pub dlog_rest: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    ln_alphabet: f64,
    ln_pmf: Vec<f64>,
    markov: Option<MarkovLogs>,
}

impl NoiseModel {
    /// IID noise with the given symbol law.
    pub fn iid(pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() < 2 || pmf.len() > 256 {
            return Err(Error::InvalidModel(format!(
                "alphabet size {} must lie in 2..=256",
                pmf.len()
            )));
        }
        if pmf.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidModel(format!("pmf has negative entries: {pmf:?}")));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidModel(format!("pmf sums to {total}, not 1")));
        }
        let ln_pmf = pmf.iter().map(|p| p.ln()).collect();
        Ok(NoiseModel {
            ln_alphabet: (pmf.len() as f64).ln(),
            kind: NoiseKind::Iid { pmf },
            ln_pmf,
            markov: None,
        })
    }

    /// Binary symmetric channel noise: IID Bernoulli(`p`).
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidModel(format!("bit flip probability {p} not in [0, 1]")));
        }
        Self::iid(vec![1.0 - p, p])
    }

    /// Two-state Markov noise started from its stationary law.
    pub fn markov(a: f64, b: f64) -> Result<Self> {
        Self::markov_with_initial(a, b, InitialDistribution::Stationary)
    }

    pub fn markov_with_initial(a: f64, b: f64, initial: InitialDistribution) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidModel(format!(
                    "transition probability {name} = {v} must lie in (0, 1)"
                )));
            }
        }
        let init = match initial {
            InitialDistribution::Stationary => [b / (a + b), a / (a + b)],
            InitialDistribution::Explicit(pi) => {
                if pi.iter().any(|&p| !(0.0..=1.0).contains(&p))
                    || (pi[0] + pi[1] - 1.0).abs() > PMF_TOLERANCE
                {
                    return Err(Error::InvalidModel(format!(
                        "initial distribution {pi:?} is not a probability vector"
                    )));
                }
                pi
            }
        };
        let markov = MarkovLogs {
            initial: [init[0].ln(), init[1].ln()],
            transition: [(1.0 - a).ln(), a.ln(), b.ln(), (1.0 - b).ln()],
        };
        Ok(NoiseModel {
            kind: NoiseKind::BinaryMarkov { a, b, initial },
            ln_alphabet: LN_2,
            ln_pmf: Vec::new(),
            markov: Some(markov),
        })
    }

    pub fn kind(&self) -> &NoiseKind {
        &self.kind
    }

    pub fn alphabet_size(&self) -> usize {
        match &self.kind {
            NoiseKind::Iid { pmf } => pmf.len(),
            NoiseKind::BinaryMarkov { .. } => 2,
        }
    }

    pub fn is_markov(&self) -> bool {
        self.markov.is_some()
    }

    /// Initial law actually used (the stationary one when unspecified).
    pub fn initial_distribution(&self) -> Option<[f64; 2]> {
        match self.kind {
            NoiseKind::BinaryMarkov { a, b, initial } => Some(match initial {
                InitialDistribution::Stationary => [b / (a + b), a / (a + b)],
                InitialDistribution::Explicit(pi) => pi,
            }),
            NoiseKind::Iid { .. } => None,
        }
    }

    /// Long-run probability that a noise symbol is non-zero.
    pub fn symbol_error_probability(&self) -> f64 {
        match &self.kind {
            NoiseKind::Iid { pmf } => 1.0 - pmf[0],
            NoiseKind::BinaryMarkov { a, b, .. } => a / (a + b),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            NoiseKind::Iid { pmf } if pmf.len() == 2 => format!("bsc(p={})", pmf[1]),
            NoiseKind::Iid { pmf } => format!("iid(pmf={pmf:?})"),
            NoiseKind::BinaryMarkov { a, b, .. } => format!("markov(a={a}, b={b})"),
        }
    }

    pub(crate) fn ln_alphabet(&self) -> f64 {
        self.ln_alphabet
    }

    pub(crate) fn ln_pmf(&self) -> &[f64] {
        &self.ln_pmf
    }

    pub(crate) fn markov_logs(&self) -> Option<&MarkovLogs> {
        self.markov.as_ref()
    }

    /// Shannon entropy rate `H`.
    pub fn shannon_entropy_rate(&self) -> f64 {
        match &self.kind {
            NoiseKind::Iid { pmf } => {
                let nats: f64 = pmf
                    .iter()
                    .zip(&self.ln_pmf)
                    .filter(|(&p, _)| p > 0.0)
                    .map(|(&p, &lp)| -p * lp)
                    .sum();
                nats / self.ln_alphabet
            }
            NoiseKind::BinaryMarkov { a, b, .. } => {
                binary_entropy(*a) * b / (a + b) + binary_entropy(*b) * a / (a + b)
            }
        }
    }

    /// Rényi entropy rate `H_α` for `α > 0`, `α ≠ 1`.
    pub fn renyi_entropy_rate(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidRenyiOrder(alpha));
        }
        if alpha == 1.0 {
            return Err(Error::RenyiAtOne);
        }
        let t = self.tilt(alpha);
        Ok((alpha * t.log_max + t.log_rest) / (1.0 - alpha))
    }

    /// Min-entropy rate `H_min = lim_{α→∞} H_α`.
    ///
    /// For Markov noise this is `-log` of the largest geometric-mean cycle
    /// probability of the transition graph: the two self loops and the
    /// two-cycle `0→1→0`.
    pub fn min_entropy_rate(&self) -> f64 {
        -self.log_max_entry()
    }

    /// `log` (base `|A|`) of the largest per-step probability along a
    /// most-likely path.
    fn log_max_entry(&self) -> f64 {
        match &self.kind {
            NoiseKind::Iid { .. } => {
                self.ln_pmf.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / self.ln_alphabet
            }
            NoiseKind::BinaryMarkov { a, b, .. } => {
                let m = (1.0 - a).max(1.0 - b).max((a * b).sqrt());
                m.log2()
            }
        }
    }

    /// Tilted spectral radius at `beta >= 0`.
    pub(crate) fn tilt(&self, beta: f64) -> Tilt {
        let log_max = self.log_max_entry();
        let ln_max = log_max * self.ln_alphabet;
        match &self.kind {
            NoiseKind::Iid { .. } => {
                let mut sum = 0.0;
                let mut dsum = 0.0;
                for &lp in self.ln_pmf.iter().filter(|lp| lp.is_finite()) {
                    let rel = lp - ln_max;
                    let w = (beta * rel).exp();
                    sum += w;
                    dsum += w * rel;
                }
                Tilt {
                    log_max,
                    log_rest: sum.ln() / self.ln_alphabet,
                    dlog_rest: dsum / sum / self.ln_alphabet,
                }
            }
            NoiseKind::BinaryMarkov { .. } => {
                let t = &self.markov.as_ref().unwrap().transition;
                let la = t[0] - ln_max;
                let lb = t[3] - ln_max;
                let lc = t[1] + t[2] - 2.0 * ln_max;
                let a = (beta * la).exp();
                let b = (beta * lb).exp();
                let c = (beta * lc).exp();
                let (da, db, dc) = (a * la, b * lb, c * lc);
                let d = ((a - b) * (a - b) + 4.0 * c).sqrt();
                let dd = if d > 0.0 {
                    ((a - b) * (da - db) + 2.0 * dc) / d
                } else {
                    0.0
                };
                let rho = 0.5 * (a + b + d);
                let drho = 0.5 * (da + db + dd);
                Tilt {
                    log_max,
                    log_rest: rho.log2(),
                    dlog_rest: drho / rho / LN_2,
                }
            }
        }
    }

    /// Base-`|A|` log-probability of `z` under the model.
    pub fn sequence_log_prob(&self, z: &[u8]) -> Result<f64> {
        if z.is_empty() {
            return Err(Error::EmptySequence);
        }
        check_symbols(z, self.alphabet_size())?;
        Ok(self.ln_prob_key(z) / self.ln_alphabet)
    }

    /// Natural-log probability of `z`, computed from its sufficient
    /// statistics in a fixed summation order. Enumeration, ranking and
    /// likelihood reporting all go through this single formula so that
    /// equal-probability sequences compare exactly equal.
    pub(crate) fn ln_prob_key(&self, z: &[u8]) -> f64 {
        match &self.markov {
            None => {
                let mut counts = vec![0u32; self.alphabet_size()];
                for &s in z {
                    counts[s as usize] += 1;
                }
                iid_key(&self.ln_pmf, &counts)
            }
            Some(logs) => {
                let mut t = [0u32; 4];
                for w in z.windows(2) {
                    t[(w[0] * 2 + w[1]) as usize] += 1;
                }
                markov_key(logs, z[0], &t)
            }
        }
    }

    /// Draw `n` noise symbols from a fresh stream seeded with `seed`.
    pub fn sample_noise(&self, n: usize, seed: u64) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        self.sample_into(&mut rng, n, &mut out);
        out
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, out: &mut Vec<u8>) {
        out.clear();
        match &self.kind {
            NoiseKind::Iid { pmf } if pmf.len() == 2 => {
                let p = pmf[1];
                out.extend((0..n).map(|_| (rng.gen::<f64>() < p) as u8));
            }
            NoiseKind::Iid { pmf } => {
                out.extend((0..n).map(|_| draw(pmf, rng.gen::<f64>())));
            }
            NoiseKind::BinaryMarkov { a, b, .. } => {
                if n == 0 {
                    return;
                }
                let init = self.initial_distribution().unwrap();
                let mut state = (rng.gen::<f64>() >= init[0]) as u8;
                out.push(state);
                for _ in 1..n {
                    let u: f64 = rng.gen();
                    state = match state {
                        0 => (u < *a) as u8,
                        _ => (u >= *b) as u8,
                    };
                    out.push(state);
                }
            }
        }
    }
}

fn draw(pmf: &[f64], u: f64) -> u8 {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in pmf.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i as u8;
        }
    }
    last as u8
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `Σ c_i ln p_i` over symbols with non-zero count.
pub(crate) fn iid_key(ln_pmf: &[f64], counts: &[u32]) -> f64 {
    let mut acc = 0.0;
    for (&c, &lp) in counts.iter().zip(ln_pmf) {
        if c > 0 {
            acc += c as f64 * lp;
        }
    }
    acc
}

/// `ln π(first) + Σ n_ij ln P_ij` with `t = [n00, n01, n10, n11]`.
pub(crate) fn markov_key(logs: &MarkovLogs, first: u8, t: &[u32; 4]) -> f64 {
    let mut acc = logs.initial[first as usize];
    for (&c, &lp) in t.iter().zip(&logs.transition) {
        if c > 0 {
            acc += c as f64 * lp;
        }
    }
    acc
}

impl Serialize for NoiseModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.kind.serialize(s)
    }
}
