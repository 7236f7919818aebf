//! Per-rate tables combining the analytic approximations with optional
//! Monte Carlo estimates, and the achievable-rate summary.

use serde::Serialize;

use super::{simulate, Abandonment, Mode, SimConfig};
use crate::analysis::{
    brute_force_computations_per_bit, bsc_block_error_fine, capacity, complexity_exponents,
    error_exponent, expected_queries_fine, grand_guesses_per_bit, grandab_error_exponent,
    grandab_guesses_per_bit, max_achievable_rate,
};
use crate::decoder::abandonment_threshold;
use crate::noise::{NoiseKind, NoiseModel};
use crate::parallel::Execution;
use crate::{Error, ExtReal, Result};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub model: NoiseModel,
    pub n: usize,
    pub rates: Vec<f64>,
    /// GRANDAB slack above `H`; GRANDAB columns are left empty without it.
    pub delta: Option<f64>,
    /// Monte Carlo trials per rate; `None` skips simulation.
    pub trials: Option<u64>,
    pub mode: Mode,
    pub seed: u64,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn new(model: NoiseModel, n: usize, rates: Vec<f64>) -> Self {
        SweepConfig {
            model,
            n,
            rates,
            delta: None,
            trials: None,
            mode: Mode::Race,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub grand_guesses_per_bit: f64,
    pub grandab_guesses_per_bit: Option<f64>,
    pub brute_force_per_bit: f64,
    pub grand_complexity_exp: f64,
    pub epsilon: ExtReal,
    #[serde(rename = "epsilon_AB")]
    pub epsilon_ab: Option<ExtReal>,
    /// `|A|^{-n ε(R)}`.
    pub approx_block_error: f64,
    pub approx_block_error_ab: Option<f64>,
    /// BSC only.
    pub fine_block_error: Option<f64>,
    pub fine_queries_per_bit: Option<f64>,
    pub fine_queries_per_bit_ab: Option<f64>,
    pub mc_block_error: Option<f64>,
    pub mc_abandonment_rate: Option<f64>,
    pub mc_queries_per_bit: Option<f64>,
}

fn bsc_p(model: &NoiseModel) -> Option<f64> {
    match model.kind() {
        NoiseKind::Iid { pmf } if pmf.len() == 2 => Some(pmf[1]),
        _ => None,
    }
}

fn decay(model: &NoiseModel, n: usize, exponent: ExtReal) -> f64 {
    let log2_q = (model.alphabet_size() as f64).log2();
    (-(n as f64) * exponent.to_f64() * log2_q).exp2().min(1.0)
}

fn approx_row(cfg: &SweepConfig, r: f64) -> Result<SweepRow> {
    let m = &cfg.model;
    let (n, q) = (cfg.n, m.alphabet_size());
    let h = m.shannon_entropy_rate();
    let h_half = m.renyi_entropy_rate(0.5)?;
    let (grand_exp, _) = complexity_exponents(m, r, cfg.delta)?;
    let epsilon = error_exponent(m, r)?;
    let epsilon_ab = cfg.delta.map(|d| grandab_error_exponent(m, r, d)).transpose()?;
    let threshold = match cfg.delta {
        Some(d) => Some(abandonment_threshold(n, q, h, d)? as f64),
        None => None,
    };
    let p = bsc_p(m);
    Ok(SweepRow {
        n,
        rate: r,
        grand_guesses_per_bit: grand_guesses_per_bit(n, q, r, h_half),
        grandab_guesses_per_bit: cfg.delta.map(|d| grandab_guesses_per_bit(n, q, r, h_half, h, d)),
        brute_force_per_bit: brute_force_computations_per_bit(n, q, r),
        grand_complexity_exp: grand_exp,
        epsilon,
        epsilon_ab,
        approx_block_error: decay(m, n, epsilon),
        approx_block_error_ab: epsilon_ab.map(|e| decay(m, n, e)),
        fine_block_error: p.map(|p| bsc_block_error_fine(n, r, p)).transpose()?,
        fine_queries_per_bit: p.map(|p| expected_queries_fine(n, r, p, None)).transpose()?,
        fine_queries_per_bit_ab: match (p, threshold) {
            (Some(p), Some(t)) => Some(expected_queries_fine(n, r, p, Some(t))?),
            _ => None,
        },
        mc_block_error: None,
        mc_abandonment_rate: None,
        mc_queries_per_bit: None,
    })
}

/// One row per rate in `cfg.rates`.
///
/// Analytic columns are evaluated under `cfg.execution` across rates; each
/// Monte Carlo run is parallel across its own trials instead, seeded by the
/// rate's position in the grid.
pub fn figure_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.n == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    if let Some(&r) = cfg.rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::InvalidArgument(format!("rate {r} not in [0, 1]")));
    }
    let mut rows: Vec<SweepRow> = cfg
        .execution
        .map_indexed(cfg.rates.len(), |i| approx_row(cfg, cfg.rates[i]))
        .into_iter()
        .collect::<Result<_>>()?;
    if let Some(trials) = cfg.trials {
        let h = cfg.model.shannon_entropy_rate();
        let q = cfg.model.alphabet_size();
        let abandonment = match cfg.delta {
            Some(d) => Abandonment::Fixed(abandonment_threshold(cfg.n, q, h, d)?),
            None => Abandonment::None,
        };
        for (i, row) in rows.iter_mut().enumerate() {
            let sim = SimConfig::new(cfg.model.clone(), cfg.n, row.rate, trials, cfg.mode, super::derive_seed(cfg.seed, i as u64))
                .with_abandonment(abandonment)
                .with_execution(cfg.execution);
            let rep = simulate(&sim)?;
            row.mc_block_error = Some(rep.block_error_rate);
            row.mc_abandonment_rate = Some(rep.abandonment_rate);
            row.mc_queries_per_bit = Some(rep.avg_queries_per_bit);
        }
    }
    Ok(rows)
}

/// Achievable rate at a block-error target, with and without abandonment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityRow {
    pub n: usize,
    pub p_block: f64,
    pub delta: Option<f64>,
    pub capacity: f64,
    pub grand_rate: Option<f64>,
    pub grand_pct_capacity: Option<f64>,
    pub grand_guesses_per_bit: Option<f64>,
    pub grandab_rate: Option<f64>,
    pub grandab_pct_capacity: Option<f64>,
    pub grandab_guesses_per_bit: Option<f64>,
}

/// Largest rate at each block length whose approximate block error stays at
/// or below `p_block`.
pub fn capacity_summary(
    model: &NoiseModel,
    ns: &[usize],
    p_block: f64,
    delta: Option<f64>,
    exec: Execution,
) -> Result<Vec<CapacityRow>> {
    let c = capacity(model);
    let q = model.alphabet_size();
    let h = model.shannon_entropy_rate();
    let h_half = model.renyi_entropy_rate(0.5)?;
    let pct = |r: Option<f64>| r.map(|r| 100.0 * r / c);
    exec.map_indexed(ns.len(), |i| -> Result<CapacityRow> {
        let n = ns[i];
        let grand_rate = max_achievable_rate(model, n, p_block, None)?;
        let grandab_rate = match delta {
            Some(d) => max_achievable_rate(model, n, p_block, Some(d))?,
            None => None,
        };
        Ok(CapacityRow {
            n,
            p_block,
            delta,
            capacity: c,
            grand_rate,
            grand_pct_capacity: pct(grand_rate),
            grand_guesses_per_bit: grand_rate.map(|r| grand_guesses_per_bit(n, q, r, h_half)),
            grandab_rate,
            grandab_pct_capacity: pct(grandab_rate),
            grandab_guesses_per_bit: match (grandab_rate, delta) {
                (Some(r), Some(d)) => Some(grandab_guesses_per_bit(n, q, r, h_half, h, d)),
                _ => None,
            },
        })
    })
    .into_iter()
    .collect()
}
