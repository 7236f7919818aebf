//! Seeded Monte Carlo harness.
//!
//! Three modes share one driver: `Explicit` decodes against a stored random
//! codebook, `Linear` against a random systematic linear code, and `Race`
//! replaces the codebook by its statistical surrogate: the exact guess rank
//! `G` of the sampled noise competes with a draw `U` from the law of the
//! first non-transmitted codeword hit, and decoding succeeds when `G < U`.
//! The `M_n - 1` competitors are uniform over all of `A^n`, so one may
//! coincide with the transmitted word, as in a codebook drawn with
//! replacement.
//!
//! Trials are cut into fixed-size chunks. Chunk `c` draws from its own
//! ChaCha8 stream seeded by [`derive_seed`]`(seed, c)`, and chunk tallies are
//! merged in chunk order, so a run's report does not depend on the number of
//! threads or on the [`Execution`] policy.

mod sweep;

use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::select_delta;
use crate::codebook::{Codebook, ExplicitCodebook, InfoWord, LinearCodebook, UHitModel};
use crate::decoder::{abandonment_threshold, grand_decode, grandab_decode, DecodeStatus};
use crate::guesswork::GuessRanker;
use crate::noise::NoiseModel;
use crate::parallel::Execution;
use crate::word::add;
use crate::{Error, Result};

pub use sweep::{capacity_summary, figure_sweep, CapacityRow, SweepConfig, SweepRow};

pub const SCHEMA_VERSION: u32 = 1;
/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 256;
/// Codebook `j` is seeded from stream `CODEBOOK_STREAM - j`.
const CODEBOOK_STREAM: u64 = u64::MAX;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `stream` under master seed `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix(master ^ mix(stream))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Explicit,
    Linear,
    Race,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Abandonment {
    None,
    Fixed(u64),
    Auto { p_abandon: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub model: NoiseModel,
    pub n: usize,
    /// Codebook rate; linear mode uses `k = round(nR)`.
    pub rate: f64,
    pub trials: u64,
    pub mode: Mode,
    pub abandonment: Abandonment,
    pub seed: u64,
    /// Independent codebooks in explicit and linear modes. Chunk `c` uses
    /// codebook `c mod codebooks`; more than one averages over the random
    /// code ensemble rather than measuring a single code.
    pub codebooks: u64,
    #[serde(skip)]
    pub execution: Execution,
    #[serde(skip)]
    pub explicit_limit_bytes: u64,
}

impl SimConfig {
    pub fn new(model: NoiseModel, n: usize, rate: f64, trials: u64, mode: Mode, seed: u64) -> Self {
        SimConfig {
            model,
            n,
            rate,
            trials,
            mode,
            abandonment: Abandonment::None,
            seed,
            codebooks: 1,
            execution: Execution::default(),
            explicit_limit_bytes: crate::codebook::DEFAULT_EXPLICIT_LIMIT_BYTES,
        }
    }

    pub fn with_abandonment(mut self, a: Abandonment) -> Self {
        self.abandonment = a;
        self
    }

    pub fn with_codebooks(mut self, codebooks: u64) -> Self {
        self.codebooks = codebooks;
        self
    }

    pub fn with_execution(mut self, e: Execution) -> Self {
        self.execution = e;
        self
    }
}

/// Trials whose query count falls in `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub config: SimConfig,
    pub trials: u64,
    pub block_errors: u64,
    pub block_error_rate: f64,
    /// 95% Wilson score interval for the block error rate.
    pub block_error_ci: [f64; 2],
    pub success_rate: f64,
    pub abandonments: u64,
    pub abandonment_rate: f64,
    pub avg_queries_per_bit: f64,
    /// Counts of query totals in bins `[2^j, 2^{j+1})`.
    pub query_histogram: Vec<HistogramBin>,
    pub delta: Option<f64>,
    pub abandonment_threshold: Option<u64>,
    pub wall_time_s: f64,
}

impl SimReport {
    /// Everything except the wall time, for reproducibility checks.
    pub fn data_eq(&self, other: &SimReport) -> bool {
        let mut a = self.clone();
        a.wall_time_s = other.wall_time_s;
        a.config.execution = other.config.execution;
        a == *other
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    trials: u64,
    errors: u64,
    abandons: u64,
    queries: f64,
    histogram: Vec<u64>,
}

impl Tally {
    fn record(&mut self, success: bool, abandoned: bool, queries: &BigUint) {
        self.trials += 1;
        self.errors += (!success) as u64;
        self.abandons += abandoned as u64;
        self.queries += crate::bigutil::to_f64(queries);
        let bin = queries.bits().saturating_sub(1) as usize;
        if self.histogram.len() <= bin {
            self.histogram.resize(bin + 1, 0);
        }
        self.histogram[bin] += 1;
    }

    fn merge(&mut self, other: &Tally) {
        self.trials += other.trials;
        self.errors += other.errors;
        self.abandons += other.abandons;
        self.queries += other.queries;
        if self.histogram.len() < other.histogram.len() {
            self.histogram.resize(other.histogram.len(), 0);
        }
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
    }
}

fn wilson(errors: u64, trials: u64) -> [f64; 2] {
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let den = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / den;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

/// Resolve the abandonment rule into a query threshold.
fn threshold(cfg: &SimConfig) -> Result<(Option<f64>, Option<u64>)> {
    match cfg.abandonment {
        Abandonment::None => Ok((None, None)),
        Abandonment::Fixed(t) => {
            if t == 0 {
                return Err(Error::InvalidArgument("abandonment threshold must be at least 1".into()));
            }
            Ok((None, Some(t)))
        }
        Abandonment::Auto { p_abandon } => {
            let m = &cfg.model;
            let delta = select_delta(m, cfg.n, p_abandon, m.symbol_error_probability())?;
            let t = abandonment_threshold(cfg.n, m.alphabet_size(), m.shannon_entropy_rate(), delta)?;
            Ok((Some(delta), Some(t)))
        }
    }
}

enum Engine {
    Decode { codebook: Codebook, linear: bool },
    Race { ranker: GuessRanker, uhit: UHitModel },
}

impl Engine {
    fn build(cfg: &SimConfig, codebook: u64) -> Result<Self> {
        let q = cfg.model.alphabet_size();
        let cb_seed = derive_seed(cfg.seed, CODEBOOK_STREAM - codebook);
        Ok(match cfg.mode {
            Mode::Explicit => Engine::Decode {
                codebook: ExplicitCodebook::uniform_with_limit(cfg.n, q, cfg.rate, cb_seed, cfg.explicit_limit_bytes)?
                    .into(),
                linear: false,
            },
            Mode::Linear => {
                if q != 2 {
                    return Err(Error::NonBinaryLinear(q));
                }
                let k = (cfg.n as f64 * cfg.rate).round() as usize;
                Engine::Decode {
                    codebook: LinearCodebook::random_systematic(cfg.n, k, cb_seed)?.into(),
                    linear: true,
                }
            }
            Mode::Race => Engine::Race {
                ranker: GuessRanker::new(&cfg.model, cfg.n)?,
                uhit: UHitModel::competitors(cfg.n, q, cfg.rate)?,
            },
        })
    }

    fn trial(&self, cfg: &SimConfig, limit: Option<u64>, rng: &mut ChaCha8Rng, noise: &mut Vec<u8>, tally: &mut Tally) -> Result<()> {
        let q = cfg.model.alphabet_size();
        match self {
            Engine::Decode { codebook, linear } => {
                let info = if *linear {
                    let k = match codebook {
                        Codebook::Linear(c) => c.k(),
                        Codebook::Explicit(_) => unreachable!(),
                    };
                    InfoWord::Bits((0..k).map(|_| rng.gen::<bool>() as u8).collect())
                } else {
                    let m = match codebook {
                        Codebook::Explicit(c) => c.len(),
                        Codebook::Linear(_) => unreachable!(),
                    };
                    InfoWord::Index(rng.gen_range(0..m))
                };
                let x = codebook.encode(&info)?;
                cfg.model.sample_into(rng, cfg.n, noise);
                let y = add(&x, noise, q);
                let result = match limit {
                    Some(t) => grandab_decode(codebook, &y, &cfg.model, t)?,
                    None => grand_decode(codebook, &y, &cfg.model)?,
                };
                let success = match &result.decoded {
                    Some(c) => codebook.decode_to_info(c)? == info,
                    None => false,
                };
                let abandoned = result.status == DecodeStatus::Abandoned;
                tally.record(success, abandoned, &BigUint::from(result.queries));
            }
            Engine::Race { ranker, uhit } => {
                cfg.model.sample_into(rng, cfg.n, noise);
                let g = ranker.rank(noise)?;
                let u = uhit.sample(rng);
                // A competitor at rank `g` duplicates the transmitted word;
                // the lower info index wins, which is the transmitted one
                // half the time.
                let (found, success) = match u {
                    None => (g, true),
                    Some(u) if g < u => (g, true),
                    Some(u) if g == u => (g, rng.gen::<bool>()),
                    Some(u) => (u, false),
                };
                match limit {
                    Some(t) if found > BigUint::from(t) => tally.record(false, true, &BigUint::from(t)),
                    _ => tally.record(success, false, &found),
                }
            }
        }
        Ok(())
    }
}

fn run(cfg: &SimConfig) -> Result<SimReport> {
    if cfg.trials == 0 || cfg.n == 0 {
        return Err(Error::InvalidArgument("trials and n must be at least 1".into()));
    }
    let start = Instant::now();
    let (delta, limit) = threshold(cfg)?;
    if cfg.codebooks == 0 {
        return Err(Error::InvalidArgument("codebooks must be at least 1".into()));
    }
    let shared = Engine::build(cfg, 0)?;
    let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let tallies = cfg.execution.map_indexed(chunks as usize, |c| -> Result<Tally> {
        let c = c as u64;
        let count = CHUNK_TRIALS.min(cfg.trials - c * CHUNK_TRIALS);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, c));
        let mut noise = Vec::with_capacity(cfg.n);
        let mut tally = Tally::default();
        let own;
        let engine = match (&shared, cfg.codebooks) {
            (Engine::Race { .. }, _) | (_, 1) => &shared,
            _ => {
                own = Engine::build(cfg, c % cfg.codebooks)?;
                &own
            }
        };
        for _ in 0..count {
            engine.trial(cfg, limit, &mut rng, &mut noise, &mut tally)?;
        }
        Ok(tally)
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(&t?);
    }
    let n_trials = total.trials as f64;
    let block_error_rate = total.errors as f64 / n_trials;
    Ok(SimReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        trials: total.trials,
        block_errors: total.errors,
        block_error_rate,
        block_error_ci: wilson(total.errors, total.trials),
        success_rate: 1.0 - block_error_rate,
        abandonments: total.abandons,
        abandonment_rate: total.abandons as f64 / n_trials,
        avg_queries_per_bit: total.queries / n_trials / cfg.n as f64,
        query_histogram: total
            .histogram
            .iter()
            .enumerate()
            .map(|(j, &count)| HistogramBin {
                lo: (j as f64).exp2(),
                hi: (j as f64 + 1.0).exp2(),
                count,
            })
            .collect(),
        delta,
        abandonment_threshold: limit,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn run_explicit(cfg: &SimConfig) -> Result<SimReport> {
    check_mode(cfg, Mode::Explicit)?;
    run(cfg)
}

pub fn run_linear(cfg: &SimConfig) -> Result<SimReport> {
    check_mode(cfg, Mode::Linear)?;
    run(cfg)
}

pub fn run_race(cfg: &SimConfig) -> Result<SimReport> {
    check_mode(cfg, Mode::Race)?;
    run(cfg)
}

/// Run in whichever mode `cfg` names.
pub fn simulate(cfg: &SimConfig) -> Result<SimReport> {
    run(cfg)
}

fn check_mode(cfg: &SimConfig, mode: Mode) -> Result<()> {
    if cfg.mode != mode {
        return Err(Error::InvalidArgument(format!("config mode {:?} used with the {mode:?} runner", cfg.mode)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(p: f64) -> NoiseModel {
        NoiseModel::bsc(p).unwrap()
    }

    #[test]
    fn noiseless_channel_never_errs() {
        for mode in [Mode::Explicit, Mode::Linear] {
            let r = simulate(&SimConfig::new(bsc(0.0), 10, 1.0, 500, mode, 1)).unwrap();
            assert_eq!(r.block_errors, 0, "{mode:?}");
        }
        // Large enough that no codeword repeats the transmitted one.
        for mode in [Mode::Explicit, Mode::Linear, Mode::Race] {
            let r = simulate(&SimConfig::new(bsc(0.0), 40, 0.25, 500, mode, 1)).unwrap();
            assert_eq!(r.block_errors, 0, "{mode:?}");
            assert!((r.avg_queries_per_bit - 1.0 / 40.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_rate_decodes_y_itself() {
        let r = run_explicit(&SimConfig::new(bsc(0.1), 8, 1.0, 4000, Mode::Explicit, 2)).unwrap();
        assert!((r.avg_queries_per_bit - 1.0 / 8.0).abs() < 1e-12);
        let p_clean = 0.9f64.powi(8);
        let sigma = (p_clean * (1.0 - p_clean) / 4000.0).sqrt();
        assert!((r.block_error_rate - (1.0 - p_clean)).abs() < 4.0 * sigma);
    }

    #[test]
    fn policies_and_repeats_are_identical() {
        for mode in [Mode::Explicit, Mode::Race] {
            let cfg = SimConfig::new(NoiseModel::markov(0.1, 0.4).unwrap(), 10, 0.5, 1000, mode, 9);
            let a = simulate(&cfg.clone().with_execution(Execution::Sequential)).unwrap();
            let b = simulate(&cfg.clone().with_execution(Execution::Parallel)).unwrap();
            let c = simulate(&cfg).unwrap();
            assert!(a.data_eq(&b) && a.data_eq(&c));
        }
    }

    #[test]
    fn single_codeword_race_always_succeeds() {
        let r = run_race(&SimConfig::new(bsc(0.05), 16, 0.0, 1000, Mode::Race, 3)).unwrap();
        assert_eq!(r.block_errors, 0);
    }

    #[test]
    fn fixed_abandonment_caps_queries() {
        let cfg = SimConfig::new(bsc(0.2), 12, 0.5, 600, Mode::Explicit, 4).with_abandonment(Abandonment::Fixed(3));
        let r = simulate(&cfg).unwrap();
        assert!(r.abandonments > 0);
        assert!(r.avg_queries_per_bit <= 3.0 / 12.0);
        assert!(r.query_histogram.len() <= 2);
        assert_eq!(r.abandonment_threshold, Some(3));
    }

    #[test]
    fn hamming_code_corrects_one_flip() {
        // Any random systematic (7, 4) code may be weaker than Hamming, so
        // compare only against the Hamming block error as a lower bound.
        let r = run_linear(&SimConfig::new(bsc(0.01), 7, 4.0 / 7.0, 20_000, Mode::Linear, 5)).unwrap();
        let p_two_or_more = 1.0 - 0.99f64.powi(7) - 7.0 * 0.01 * 0.99f64.powi(6);
        assert!(r.block_error_rate >= 0.5 * p_two_or_more);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_race(&SimConfig::new(bsc(0.1), 10, 0.5, 10, Mode::Explicit, 0)).is_err());
        assert!(simulate(&SimConfig::new(bsc(0.1), 10, 0.5, 0, Mode::Race, 0)).is_err());
        let ternary = NoiseModel::iid(vec![0.8, 0.1, 0.1]).unwrap();
        assert!(simulate(&SimConfig::new(ternary, 10, 0.5, 10, Mode::Linear, 0)).is_err());
        assert!(simulate(&SimConfig::new(bsc(0.1), 64, 0.9, 10, Mode::Explicit, 0)).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|c| derive_seed(42, c)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
