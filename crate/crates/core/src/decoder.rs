//! GRAND: query noise sequences in decreasing likelihood and stop at the
//! first one whose removal lands in the codebook. GRANDAB additionally gives
//! up after a fixed number of queries.

use serde::Serialize;

use crate::codebook::{Codebook, ExplicitCodebook};
use crate::guesswork::GuessEnumerator;
use crate::noise::NoiseModel;
use crate::word::{check_length, check_symbols, subtract_into};
use crate::{Error, Result};

/// Default cap on `log2` of an abandonment threshold.
pub const DEFAULT_EXPONENT_CAP_BITS: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeStatus {
    Decoded,
    Abandoned,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeResult {
    pub decoded: Option<Vec<u8>>,
    /// Number of codebook queries made, including the successful one.
    pub queries: u64,
    pub status: DecodeStatus,
    /// Base-`|A|` log-probability of the noise `y ⊖ decoded`.
    pub decoded_log_prob: Option<f64>,
}

fn check_inputs(cb: &Codebook, y: &[u8], model: &NoiseModel) -> Result<()> {
    if cb.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    if model.alphabet_size() != cb.alphabet_size() {
        return Err(Error::InvalidArgument(format!(
            "noise alphabet {} differs from codebook alphabet {}",
            model.alphabet_size(),
            cb.alphabet_size()
        )));
    }
    check_length(y, cb.n())?;
    check_symbols(y, cb.alphabet_size())
}

/// Guess until a codeword is found; the result is a maximum-likelihood
/// decoding.
pub fn grand_decode(cb: &Codebook, y: &[u8], model: &NoiseModel) -> Result<DecodeResult> {
    check_inputs(cb, y, model)?;
    Ok(guess_loop(cb, y, model, u64::MAX))
}

/// [`grand_decode`] that abandons after `max_queries` unsuccessful queries.
pub fn grandab_decode(
    cb: &Codebook,
    y: &[u8],
    model: &NoiseModel,
    max_queries: u64,
) -> Result<DecodeResult> {
    if max_queries == 0 {
        return Err(Error::InvalidArgument("max_queries must be at least 1".into()));
    }
    check_inputs(cb, y, model)?;
    Ok(guess_loop(cb, y, model, max_queries))
}

fn guess_loop(cb: &Codebook, y: &[u8], model: &NoiseModel, max_queries: u64) -> DecodeResult {
    let q = cb.alphabet_size();
    let mut guesses = GuessEnumerator::new(model, y.len()).expect("length checked");
    let mut x = Vec::with_capacity(y.len());
    let mut queries = 0u64;
    while queries < max_queries {
        let Some((z, log_prob)) = guesses.next_ref() else {
            break;
        };
        queries += 1;
        subtract_into(y, z, q, &mut x);
        if cb.contains_unchecked(&x) {
            return DecodeResult {
                decoded: Some(x),
                queries,
                status: DecodeStatus::Decoded,
                decoded_log_prob: Some(log_prob),
            };
        }
    }
    debug_assert!(queries == max_queries, "a non-empty codebook is always found");
    DecodeResult {
        decoded: None,
        queries,
        status: DecodeStatus::Abandoned,
        decoded_log_prob: None,
    }
}

/// `⌈q^{n(H+δ)}⌉`, clamped to `q^n`.
pub fn abandonment_threshold(n: usize, alphabet: usize, h: f64, delta: f64) -> Result<u64> {
    abandonment_threshold_with_cap(n, alphabet, h, delta, DEFAULT_EXPONENT_CAP_BITS)
}

pub fn abandonment_threshold_with_cap(
    n: usize,
    alphabet: usize,
    h: f64,
    delta: f64,
    cap_bits: u32,
) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    if !(delta > 0.0) || !h.is_finite() || h < 0.0 {
        return Err(Error::InvalidArgument(format!("need H >= 0 and delta > 0, got H = {h}, delta = {delta}")));
    }
    let digits = n as f64 * (h + delta).min(1.0);
    let exponent_bits = digits * (alphabet as f64).log2();
    if exponent_bits > cap_bits as f64 {
        return Err(Error::ExponentCap { exponent_bits, cap_bits });
    }
    let snapped = digits.round();
    if (digits - snapped).abs() < 1e-9 {
        if let Some(v) = (alphabet as u64).checked_pow(snapped as u32) {
            return Ok(v);
        }
    }
    Ok(exponent_bits.exp2().ceil() as u64)
}

/// Outcome of exhaustive maximum-likelihood decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct MlDecision {
    pub index: u64,
    pub codeword: Vec<u8>,
    /// Base-`|A|` log-probability of `y ⊖ codeword`.
    pub log_prob: f64,
}

/// Score every codeword; ties go to the lowest info index.
pub fn brute_force_ml(cb: &ExplicitCodebook, y: &[u8], model: &NoiseModel) -> Result<MlDecision> {
    if cb.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    check_length(y, cb.n())?;
    check_symbols(y, cb.alphabet_size())?;
    let q = cb.alphabet_size();
    let mut z = Vec::with_capacity(y.len());
    let mut best: Option<(u64, f64)> = None;
    for (i, c) in cb.iter().enumerate() {
        subtract_into(y, c, q, &mut z);
        let key = model.ln_prob_key(&z);
        if best.is_none_or(|(_, b)| key > b) {
            best = Some((i as u64, key));
        }
    }
    let (index, key) = best.unwrap();
    Ok(MlDecision {
        index,
        codeword: cb.word(index).unwrap().to_vec(),
        log_prob: key / model.ln_alphabet(),
    })
}
