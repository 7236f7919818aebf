//! Maximum-likelihood decoding by guessing the channel noise.
//!
//! The crate is split along the lines of the decoding pipeline:
//!
//! * [`noise`]: IID and two-state Markov noise laws and their entropy rates.
//! * [`guesswork`]: enumeration of noise sequences in decreasing likelihood,
//!   exact guesswork ranks, and the guesswork rate function.
//! * [`codebook`]: uniform-random and binary linear codebooks, plus the
//!   statistical model for the first hit of a non-transmitted codeword.
//! * [`decoder`]: GRAND, GRANDAB and a brute-force ML oracle.
//! * [`analysis`]: error, success and complexity exponents and the fine
//!   block-error approximation for the BSC.
//! * [`simulator`]: seeded Monte Carlo harness (explicit, linear and race
//!   modes) and figure sweeps.
//!
//! All logarithms are taken base `|A|`, the alphabet size, unless a function
//! says otherwise.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod codebook;
pub mod decoder;
mod bigutil;
mod error;
mod ext;
pub mod guesswork;
pub mod noise;
pub mod parallel;
pub mod simulator;
pub mod word;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub use noise::NoiseModel;
