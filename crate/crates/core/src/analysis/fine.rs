//! Finite-`n` approximations for the binary symmetric channel, built on the
//! exact Hamming-layer structure of the guessing order and the exponential
//! approximation to the first non-transmitted codeword hit.

use std::f64::consts::LN_2;

use num_bigint::BigUint;

use crate::bigutil;
use crate::codebook::size_exponent;
use crate::guesswork::cumulative_binomial_layers;
use crate::{Error, Result};

/// Terms whose natural-log size falls below this are dropped.
const UNDERFLOW: f64 = -745.0;
/// Below this value of `b·r` the per-layer sums use a cubic series.
const SERIES_LIMIT: f64 = 1e-4;

/// `ln(1 - e^{-x})` for `x = 2^{log2_x} > 0`.
fn ln_one_minus_exp_neg(log2_x: f64) -> f64 {
    if log2_x < -30.0 {
        let x = log2_x.exp2();
        log2_x * LN_2 + (-0.5 * x).ln_1p()
    } else {
        (-(-log2_x.exp2()).exp_m1()).ln()
    }
}

struct Layers {
    /// `log2` of `l_{k-1}` and `l_k` and `C(n, k)`, for `k = 0..=n`.
    log2_prev: Vec<f64>,
    log2_cur: Vec<f64>,
    log2_size: Vec<f64>,
}

impl Layers {
    fn new(n: usize) -> Self {
        let l = cumulative_binomial_layers(n);
        let log2 = |x: &BigUint| bigutil::log2(x);
        Layers {
            log2_prev: (0..=n).map(|k| log2(&l[k])).collect(),
            log2_cur: (0..=n).map(|k| log2(&l[k + 1])).collect(),
            log2_size: (0..=n).map(|k| log2(&(&l[k + 1] - &l[k]))).collect(),
        }
    }
}

fn check_bsc_args(n: usize, r: f64, p: f64) -> Result<()> {
    if n == 0 || !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1, R in [0, 1], p in [0, 1]; got n = {n}, R = {r}, p = {p}"
        )));
    }
    Ok(())
}

/// `ln(p^k (1-p)^{n-k})` for the more likely symbol first.
fn ln_layer_weight(n: usize, k: usize, p: f64) -> f64 {
    let p = p.min(1.0 - p);
    let term = |c: usize, q: f64| if c == 0 { 0.0 } else { c as f64 * q.ln() };
    term(k, p) + term(n - k, 1.0 - p)
}

/// `-log2` of the exponential hit rate, `n(1-R)`.
fn log2_hit_rate(n: usize, r: f64) -> f64 {
    -(n as f64 - size_exponent(n, r))
}

/// Probability that the transmitted noise is guessed before any other
/// codeword, `P(G(N^n) < U^n)`, with `U^n` exponential of rate
/// `r = 2^{-n(1-R)}`:
///
/// `Σ_k p^k (1-p)^{n-k} Σ_{g = l_{k-1}+1}^{l_k} e^{-g r}`,
///
/// each inner geometric sum evaluated in closed form. The block error
/// probability is one minus this value.
pub fn bsc_success_prob_fine(n: usize, r: f64, p: f64) -> Result<f64> {
    check_bsc_args(n, r, p)?;
    let layers = Layers::new(n);
    let log2_rate = log2_hit_rate(n, r);
    let ln_den = ln_one_minus_exp_neg(log2_rate);
    let mut total = 0.0;
    for k in 0..=n {
        let ln_w = ln_layer_weight(n, k, p);
        if ln_w == f64::NEG_INFINITY {
            continue;
        }
        // First guess of layer k is l_{k-1} + 1.
        let first_exp = if k == 0 {
            log2_rate.exp2()
        } else {
            (layers.log2_prev[k] + log2_rate).exp2() + log2_rate.exp2()
        };
        if -first_exp < UNDERFLOW {
            break;
        }
        let ln_geom = -first_exp + ln_one_minus_exp_neg(layers.log2_size[k] + log2_rate) - ln_den;
        let ln_term = ln_w + ln_geom;
        if ln_term > UNDERFLOW {
            total += ln_term.exp();
        }
    }
    Ok(total.min(1.0))
}

/// `1 - bsc_success_prob_fine`.
pub fn bsc_block_error_fine(n: usize, r: f64, p: f64) -> Result<f64> {
    bsc_success_prob_fine(n, r, p).map(|s| 1.0 - s)
}

/// Mean of `1 - e^{-g r}` over `g` in `(a, b]`, given `a·r`, `b·r` and `r`.
fn mean_one_minus_exp(ar: f64, br: f64, r: f64, log2_count: f64, log2_r: f64) -> f64 {
    if br < SERIES_LIMIT {
        // Mean powers of g over the layer, scaled by r.
        let m1 = 0.5 * (ar + br + r);
        let m2 = (2.0 * (br * br + ar * br + ar * ar) + 3.0 * r * (ar + br) + r * r) / 6.0;
        let m3 = (ar + br + r) * (ar * ar + ar * r + br * br + br * r) / 4.0;
        m1 - m2 / 2.0 + m3 / 6.0
    } else {
        // 1 - e^{-(a+1) r} (1 - e^{-c r}) / (c (1 - e^{-r})).
        let ln_ratio = ln_one_minus_exp_neg(log2_count + log2_r) - log2_count * LN_2 - ln_one_minus_exp_neg(log2_r);
        -(-(ar + r) + ln_ratio).exp_m1()
    }
}

/// Expected number of queries per bit, `E(min(G, U, T)) / n`, where `T` is
/// an optional abandonment threshold and `U` follows the exponential
/// approximation of rate `2^{-n(1-R)}`.
///
/// Uses `E(min(G, U, T)) = Σ_{m < T} P(G > m) P(U > m)`, rearranged as
/// `Σ_g P(G = g) f(min(g, T))` with `f(t) = (1 - e^{-t r}) / (1 - e^{-r})`,
/// and sums each Hamming layer in closed form.
pub fn expected_queries_fine(n: usize, r: f64, p: f64, max_queries: Option<f64>) -> Result<f64> {
    check_bsc_args(n, r, p)?;
    if let Some(t) = max_queries {
        if !(t >= 1.0) {
            return Err(Error::InvalidArgument(format!("max_queries must be at least 1, got {t}")));
        }
    }
    let layers = Layers::new(n);
    let log2_r = log2_hit_rate(n, r);
    let rate = log2_r.exp2();
    let ln_den = ln_one_minus_exp_neg(log2_r);
    let log2_t = max_queries.map(f64::log2).unwrap_or(f64::INFINITY);
    // ln f(T).
    let ln_f_t = if log2_t.is_finite() {
        ln_one_minus_exp_neg(log2_t + log2_r) - ln_den
    } else {
        -ln_den
    };
    let mut total = 0.0;
    for k in 0..=n {
        let ln_w = ln_layer_weight(n, k, p);
        if ln_w == f64::NEG_INFINITY {
            continue;
        }
        let log2_a = layers.log2_prev[k];
        let log2_b = layers.log2_cur[k];
        // Part of the layer at or below T.
        let log2_b_cut = log2_b.min(log2_t);
        if log2_b_cut > log2_a {
            let log2_count = if log2_b_cut < log2_b {
                // count = T - a, formed in linear space; both are below 2^1023.
                (log2_b_cut.exp2() - log2_a.exp2()).log2()
            } else {
                layers.log2_size[k]
            };
            let ar = (log2_a + log2_r).exp2();
            let br = (log2_b_cut + log2_r).exp2();
            let mean = mean_one_minus_exp(ar, br, rate, log2_count, log2_r);
            let ln_term = ln_w + log2_count * LN_2 + mean.ln() - ln_den;
            if ln_term > UNDERFLOW {
                total += ln_term.exp();
            }
        }
        // Remainder of the layer, each query count capped at T.
        if log2_b > log2_t {
            let log2_rest = if log2_a >= log2_t {
                layers.log2_size[k]
            } else {
                (log2_b.exp2() - log2_t.exp2()).log2()
            };
            let ln_term = ln_w + log2_rest * LN_2 + ln_f_t;
            if ln_term > UNDERFLOW {
                total += ln_term.exp();
            }
        }
    }
    Ok(total / n as f64)
}

/// `|A|^{n·min(1-R, H_{1/2})} / n`.
pub fn grand_guesses_per_bit(n: usize, alphabet: usize, r: f64, h_half: f64) -> f64 {
    per_bit(n, alphabet, (1.0 - r).min(h_half))
}

/// `|A|^{n·min(1-R, H_{1/2}, H+δ)} / n`.
pub fn grandab_guesses_per_bit(n: usize, alphabet: usize, r: f64, h_half: f64, h: f64, delta: f64) -> f64 {
    per_bit(n, alphabet, (1.0 - r).min(h_half).min(h + delta))
}

/// `|A|^{nR} / n`: likelihood evaluations per bit for brute-force ML.
pub fn brute_force_computations_per_bit(n: usize, alphabet: usize, r: f64) -> f64 {
    per_bit(n, alphabet, r)
}

fn per_bit(n: usize, alphabet: usize, exponent: f64) -> f64 {
    (n as f64 * exponent * (alphabet as f64).log2()).exp2() / n as f64
}
