//! Distributed compression of a function of two correlated sources.
//!
//! Two encoders see `X^n` and `Y^n` separately and send random bin indices;
//! the decoder wants only `Z^n = F(X^n, Y^n)` symbol by symbol. The crate
//! covers the pieces needed to study that setup numerically:
//!
//! * [`source`]: finite joint pmfs, function tables, sampling, JSON documents;
//! * [`info`]: exact entropies and the conditional terms of both rate regions;
//! * [`region`]: the function region and the Slepian-Wolf region, membership,
//!   corners and boundary polylines;
//! * [`typicality`]: weak and joint typicality, exhaustive typical-set counts;
//! * [`codec`]: nested random binning, the joint-typicality decoder and its
//!   error events;
//! * [`sim`]: Monte Carlo sweeps, confidence intervals, Fano diagnostics.

pub mod codec;
pub mod error;
pub mod info;
pub mod region;
pub mod sim;
pub mod source;
pub mod stream;
pub mod typicality;

pub use error::{Error, Result};
