//! Error, success and complexity exponents, abandonment tuning, and finite
//! block-length approximations for the BSC.
//!
//! Exponents are rates of decay in `log_{|A|}` per symbol, so that, for
//! instance, the block error probability of GRAND is roughly
//! `|A|^{-n ε(R)}` below capacity.

mod exponents;
mod fine;
mod report;

pub use exponents::{
    brute_force_crossover_rate, capacity, capacity_fraction, complexity_exponents,
    critical_rate_x_star, error_exponent, error_exponent_piecewise, grand_rate_function,
    grandab_error_exponent, max_achievable_rate, rate_function_i_u, select_delta,
    success_exponent, supercritical_threshold_y_star,
};
pub use fine::{
    brute_force_computations_per_bit, bsc_block_error_fine, bsc_success_prob_fine,
    expected_queries_fine, grand_guesses_per_bit, grandab_guesses_per_bit,
};
pub use report::{exponent_report, exponent_rows, ExponentReport, ExponentRow};
