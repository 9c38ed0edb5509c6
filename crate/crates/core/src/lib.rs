//! Distribution of the multiple point range of closed simple random walks.
//!
//! For a closed walk `w` of length `2n` on `Z^d`, `N_{2k}(w)` counts the sites
//! visited exactly `k` times (the starting point counted once), and the range
//! `ran(w) = sum_k N_{2k}(w)` counts distinct sites. The crate computes, in one
//! dimension, the exact joint distribution of any finite set of the `N_{2k}`
//! from their generating functions; first moments in every dimension; and
//! the large-`n` limits (tail rates, covariances, range moments). An
//! exhaustive enumerator and a Monte Carlo sampler serve as oracles.

pub mod asymptotics;
pub mod error;
pub mod genfun;
pub mod moments;
pub mod pseries;
pub mod walks;

pub use error::{Error, Result};
