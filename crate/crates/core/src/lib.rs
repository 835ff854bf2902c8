//! An experimental laboratory for algorithmic probability.
//!
//! The crate estimates the algorithmic probability of short binary strings
//! by exhaustively running small Turing machine spaces and tallying output
//! frequencies, then compares those distributions against strings harvested
//! from cellular automata and from real-world data. Supporting machinery:
//! Busy Beaver searches to calibrate runtime caps, a binary-string symmetry
//! group with Burnside counting, Spearman rank correlation with a seeded
//! permutation test, and reproducible JSON/CSV/PBM artifacts.
//!
//! Everything seeded is deterministic: the same parameters and seed produce
//! byte-identical serialized results at any worker count.
//!
//! # Module map
//! - [`tm`]: (n,2) Turing machines, index codec, runner, Busy Beaver search.
//! - [`distribution`]: exhaustive machine-space runs folded into
//!   [`distribution::PatternDistribution`], the shared frequency type.
//! - [`automata`]: elementary and 2D totalistic cellular automata with
//!   cutoff k-tuple sampling.
//! - [`ingest`]: binarization of external data, k-tuple counting,
//!   compression ratios, and a pi digit generator.
//! - [`stats`]: support alignment, Spearman rho, permutation p-values.
//! - [`symmetry`]: the reverse/complement group acting on binary strings.
//! - [`persist`]: canonical JSON distribution files, CSV export, PBM images.
//! - [`rng`]: the deterministic PRNG and its substream derivation.

pub mod automata;
mod bits;
pub mod distribution;
pub mod error;
pub mod ingest;
pub mod persist;
pub mod rng;
pub mod stats;
pub mod symmetry;
pub mod tm;

pub use error::{Error, Result};
