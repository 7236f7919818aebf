//! `grand`: command-line front end for the decoders, the exponent calculator
//! and the Monte Carlo harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grand::analysis::{
    bsc_block_error_fine, bsc_success_prob_fine, expected_queries_fine, exponent_rows, select_delta,
};
use grand::codebook::{load_codebook, save_codebook, Codebook, ExplicitCodebook, LinearCodebook};
use grand::decoder::{grand_decode, grandab_decode};
use grand::guesswork::GuessEnumerator;
use grand::parallel::Execution;
use grand::simulator::{
    capacity_summary, figure_sweep, simulate, Abandonment, Mode, SimConfig, SweepConfig,
};
use grand::word::{format_word, parse_word, to_digits};
use grand::NoiseModel;

#[derive(Parser)]
#[command(name = "grand", version, about = "Noise-guessing decoding, exponents and simulation")]
struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List noise sequences in guessing order as CSV.
    GuessOrder(GuessOrderArgs),
    /// Decode one received word against a stored codebook.
    Decode(DecodeArgs),
    /// Generate a codebook file.
    Codebook(CodebookArgs),
    /// Error, success and complexity exponents over a grid of rates.
    Exponents(ExponentsArgs),
    /// Finite-n BSC block error and expected queries.
    Blerr(BlerrArgs),
    /// Monte Carlo block error simulation.
    Simulate(SimulateArgs),
    /// Per-rate table of complexities and error probabilities.
    FigureSweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Bsc,
    Markov,
    Iid,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "bsc")]
    model: ModelKind,
    /// Bit flip probability.
    #[arg(long)]
    p: Option<f64>,
    /// Markov transition probability 0 -> 1.
    #[arg(long)]
    a: Option<f64>,
    /// Markov transition probability 1 -> 0.
    #[arg(long)]
    b: Option<f64>,
    /// Symbol probabilities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pmf: Option<Vec<f64>>,
}

impl ModelArgs {
    fn build(&self) -> Result<NoiseModel> {
        let need = |v: Option<f64>, name: &str| v.with_context(|| format!("--{name} is required for this model"));
        Ok(match self.model {
            ModelKind::Bsc => NoiseModel::bsc(need(self.p, "p")?)?,
            ModelKind::Markov => NoiseModel::markov(need(self.a, "a")?, need(self.b, "b")?)?,
            ModelKind::Iid => NoiseModel::iid(self.pmf.clone().context("--pmf is required for iid noise")?)?,
        })
    }
}

#[derive(Args)]
struct GuessOrderArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    /// Number of guesses to print.
    #[arg(long, default_value_t = 32)]
    limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    codebook: PathBuf,
    /// Received word: hex for binary codebooks, else comma-separated symbols.
    #[arg(long)]
    y: String,
    #[arg(long)]
    abandon_after: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodebookKind {
    Uniform,
    Linear,
}

#[derive(Args)]
struct CodebookArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    kind: CodebookKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rate: f64,
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExponentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Rates as `start:step:stop`.
    #[arg(long, default_value = "0:0.01:1")]
    rate_grid: String,
    #[arg(long, conflicts_with = "auto_delta")]
    delta: Option<f64>,
    /// Pick δ from `--p-abandon` and `--n`.
    #[arg(long, requires_all = ["p_abandon", "n"])]
    auto_delta: bool,
    #[arg(long)]
    p_abandon: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// CSV output; `.json` writes JSON instead. Defaults to stdout CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BlerrArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rate: f64,
    #[arg(long)]
    abandon_after: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Explicit,
    Linear,
    Race,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Explicit => Mode::Explicit,
            ModeArg::Linear => Mode::Linear,
            ModeArg::Race => Mode::Race,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AbandonArg {
    None,
    Auto,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "race")]
    mode: ModeArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rate: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "none", conflicts_with = "abandon_after")]
    abandon: AbandonArg,
    #[arg(long, default_value_t = 1e-2)]
    p_abandon: f64,
    #[arg(long)]
    abandon_after: Option<u64>,
    /// Independent codebooks, cycled across chunks of 256 trials.
    #[arg(long, default_value_t = 1)]
    codebooks: u64,
    /// Memory guard for explicit codebooks, in bytes.
    #[arg(long)]
    explicit_limit_bytes: Option<u64>,
    /// JSON report; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "0.02:0.02:0.98")]
    rate_grid: String,
    #[arg(long, conflicts_with = "p_abandon")]
    delta: Option<f64>,
    /// Pick δ for this abandonment probability.
    #[arg(long)]
    p_abandon: Option<f64>,
    /// Add Monte Carlo columns with this many trials per rate.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum, default_value = "race")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the achievable-rate summary for these block lengths instead.
    #[arg(long, value_delimiter = ',')]
    capacity_ns: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1e-3)]
    p_block: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad grid value {s:?}")))
        .collect::<Result<_>>()?;
    let [start, step, stop] = parts[..] else {
        bail!("grid must be start:step:stop, got {text:?}");
    };
    if !(step > 0.0) || stop < start {
        bail!("grid needs step > 0 and stop >= start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    // Round to 12 digits so grid points print cleanly.
    Ok((0..=count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_csv<T: Serialize>(rows: &[T], path: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(path)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn is_json(path: Option<&Path>) -> bool {
    path.and_then(|p| p.extension()).is_some_and(|e| e == "json")
}

#[derive(Serialize)]
struct GuessRow {
    rank: u64,
    sequence: String,
    log_prob: f64,
}

fn guess_order(args: &GuessOrderArgs) -> Result<()> {
    let model = args.model.build()?;
    let rows: Vec<GuessRow> = GuessEnumerator::new(&model, args.n)?
        .take(args.limit as usize)
        .enumerate()
        .map(|(i, g)| GuessRow {
            rank: i as u64 + 1,
            sequence: to_digits(&g.sequence),
            log_prob: g.log_prob,
        })
        .collect();
    write_csv(&rows, args.out.as_deref())
}

#[derive(Serialize)]
struct DecodeOutput {
    decoded: Option<String>,
    queries: u64,
    status: grand::decoder::DecodeStatus,
    decoded_log_prob: Option<f64>,
}

fn decode(args: &DecodeArgs) -> Result<()> {
    let model = args.model.build()?;
    let cb = load_codebook(&args.codebook)?;
    let q = cb.alphabet_size();
    let y = parse_word(&args.y, cb.n(), q)?;
    let r = match args.abandon_after {
        Some(t) => grandab_decode(&cb, &y, &model, t)?,
        None => grand_decode(&cb, &y, &model)?,
    };
    let out = DecodeOutput {
        decoded: r.decoded.as_deref().map(|w| format_word(w, q)),
        queries: r.queries,
        status: r.status,
        decoded_log_prob: r.decoded_log_prob,
    };
    write_json(&out, None)
}

fn codebook(args: &CodebookArgs) -> Result<()> {
    let cb: Codebook = match args.kind {
        CodebookKind::Uniform => ExplicitCodebook::uniform(args.n, args.alphabet, args.rate, args.seed)?.into(),
        CodebookKind::Linear => {
            if args.alphabet != 2 {
                bail!("linear codebooks are binary");
            }
            let k = (args.n as f64 * args.rate).round() as usize;
            LinearCodebook::random_systematic(args.n, k, args.seed)?.into()
        }
    };
    save_codebook(&cb, &args.out)?;
    Ok(())
}

fn exponents(args: &ExponentsArgs, exec: Execution) -> Result<()> {
    let model = args.model.build()?;
    let rates = parse_grid(&args.rate_grid)?;
    let delta = if args.auto_delta {
        let (p_ab, n) = (args.p_abandon.unwrap(), args.n.unwrap());
        Some(select_delta(&model, n, p_ab, model.symbol_error_probability())?)
    } else {
        args.delta
    };
    let rows = exponent_rows(&model, &rates, delta, exec)?;
    if is_json(args.out.as_deref()) {
        write_json(&rows, args.out.as_deref())
    } else {
        write_csv(&rows, args.out.as_deref())
    }
}

#[derive(Serialize)]
struct BlerrOutput {
    block_error: f64,
    success_prob: f64,
    queries_per_bit: f64,
}

fn blerr(args: &BlerrArgs) -> Result<()> {
    let out = BlerrOutput {
        block_error: bsc_block_error_fine(args.n, args.rate, args.p)?,
        success_prob: bsc_success_prob_fine(args.n, args.rate, args.p)?,
        queries_per_bit: expected_queries_fine(args.n, args.rate, args.p, args.abandon_after)?,
    };
    write_json(&out, None)
}

fn simulate_cmd(args: &SimulateArgs, exec: Execution) -> Result<()> {
    let model = args.model.build()?;
    let abandonment = match (args.abandon_after, args.abandon) {
        (Some(t), _) => Abandonment::Fixed(t),
        (None, AbandonArg::Auto) => Abandonment::Auto { p_abandon: args.p_abandon },
        (None, AbandonArg::None) => Abandonment::None,
    };
    let mut cfg = SimConfig::new(model, args.n, args.rate, args.trials, args.mode.into(), args.seed)
        .with_abandonment(abandonment)
        .with_codebooks(args.codebooks)
        .with_execution(exec);
    if let Some(limit) = args.explicit_limit_bytes {
        cfg.explicit_limit_bytes = limit;
    }
    let report = simulate(&cfg)?;
    write_json(&report, args.out.as_deref())
}

fn sweep(args: &SweepArgs, exec: Execution) -> Result<()> {
    let model = args.model.build()?;
    let delta = match args.p_abandon {
        Some(p_ab) => Some(select_delta(&model, args.n, p_ab, model.symbol_error_probability())?),
        None => args.delta,
    };
    if let Some(ns) = &args.capacity_ns {
        let rows = capacity_summary(&model, ns, args.p_block, delta, exec)?;
        return write_csv(&rows, args.out.as_deref());
    }
    let mut cfg = SweepConfig::new(model, args.n, parse_grid(&args.rate_grid)?);
    cfg.delta = delta;
    cfg.trials = args.trials;
    cfg.mode = args.mode.into();
    cfg.seed = args.seed;
    cfg.execution = exec;
    write_csv(&figure_sweep(&cfg)?, args.out.as_deref())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::GuessOrder(a) => guess_order(a),
        Command::Decode(a) => decode(a),
        Command::Codebook(a) => codebook(a),
        Command::Exponents(a) => exponents(a, exec),
        Command::Blerr(a) => blerr(a),
        Command::Simulate(a) => simulate_cmd(a, exec),
        Command::FigureSweep(a) => sweep(a, exec),
    }
}
