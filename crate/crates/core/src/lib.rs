//! Undetected-error analysis of CRC codes over length intervals, and
//! exhaustive search for generators that are optimal across an interval.
//!
//! The pieces, bottom up:
//!
//! - [`poly`]: GF(2) polynomials, reciprocals, multiplicative order.
//! - [`codec`]: systematic encoding, divisibility checks, parity-check
//!   columns, burst coverage.
//! - [`spectrum`]: dual-code enumeration, MacWilliams recovery of `d` and
//!   `A_d`, per-length distance profiles.
//! - [`metrics`]: `P_ue` in both forms, the first-term approximation,
//!   cumulative `S_d` / `S_Ad` scores.
//! - [`search`]: candidate enumeration, ranking, parallel and resumable
//!   search campaigns.
//! - [`oracle`]: brute-force spectra, exhaustive error enumeration and
//!   Monte Carlo simulation used to cross-check everything above.
//! - [`cli`]: the `crcsel` command-line front end.
//!
//! ```
//! use crcsel::{poly::Generator, spectrum::distance_profile, metrics::cumulative_scores};
//!
//! let g: Generator = "59".parse().unwrap();
//! let profile = distance_profile(g, 18, 25).unwrap();
//! let score = cumulative_scores(&profile);
//! assert_eq!(score.s_d, 32);
//! assert_eq!(score.s_ad.to_string(), "1956");
//! ```

pub mod cli;
pub mod codec;
pub mod error;
mod krawtchouk;
pub mod metrics;
pub mod oracle;
pub mod poly;
pub mod presets;
pub mod search;
mod serde_big;
pub mod spectrum;

pub use error::{Error, Result};
pub use krawtchouk::krawtchouk_direct;
