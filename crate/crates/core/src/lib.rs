//! Hybrid analog/digital precoder and combiner design for millimeter-wave
//! MIMO links by the alternating direction method of multipliers (ADMM).
//!
//! The crate covers the whole simulation chain:
//!
//! * [`channel`]: clustered narrowband and OFDM channels over square planar
//!   arrays;
//! * [`digital`]: the unconstrained SVD precoder/combiner and the
//!   achievable-rate evaluator;
//! * [`admm`]: fully-connected, partially-connected and wideband hybrid
//!   designers;
//! * [`harness`]: seeded Monte Carlo sweeps with CSV output.
//!
//! ```
//! use hybridsim::{admm, channel::ChannelModel, digital};
//!
//! let ch = ChannelModel::new(4, 2).realize(7, 1);
//! let opt = digital::optimal_factors(ch.narrowband(), 2).unwrap();
//! let pre = admm::design_fully_connected(&opt.f_opt, 3, &admm::AdmmConfig::default(), true).unwrap();
//! let comb = admm::design_fully_connected(&opt.w_opt, 3, &admm::AdmmConfig::default(), false).unwrap();
//! let rate = digital::spectral_efficiency(ch.narrowband(), &pre.composite(0), &comb.composite(0), 1.0, 2).unwrap();
//! assert!(rate > 0.0);
//! ```

pub mod admm;
pub mod channel;
pub mod digital;
pub mod error;
pub mod harness;
pub mod numerics;

pub use admm::{AdmmConfig, HybridFactors, PenaltyScale, Structure, TraceEntry};
pub use error::{Error, Result};
pub use numerics::ComplexMatrix;
