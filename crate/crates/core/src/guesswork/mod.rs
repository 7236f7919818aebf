//! Guesswork: ordering noise sequences by likelihood.
//!
//! The guessing order sorts all of `A^n` by non-increasing probability and
//! breaks ties by ascending numeric value (first symbol most significant).
//! [`GuessEnumerator`] produces that order lazily, [`GuessRanker`] computes
//! positions in it without enumerating, and [`RateFunction`] evaluates the
//! large-deviations rate function of `(1/n) log G(N^n)`.

mod classes;
mod enumerator;
mod layers;
mod rank;
pub(crate) mod rate;

pub use enumerator::{Guess, GuessEnumerator};
pub use layers::{cumulative_binomial_layers, layer_log2_sizes};
pub use rank::{guess_rank, GuessRanker};
pub use rate::{
    rate_function_table, rate_function_table_with, scgf_derivative, scgf_lambda_n, RateFunction,
    RateFunctionTable, RatePoint,
};
