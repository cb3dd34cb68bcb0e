//! Downlink coverage of mmWave base stations deployed along a highway, with
//! large vehicles acting as moving blockages.
//!
//! The crate has two halves that are meant to be compared against each other:
//!
//! * an analytical engine ([`association`], [`interference`], [`coverage`])
//!   built on one-dimensional Poisson point processes, and
//! * an event-level Monte Carlo simulator ([`mcsim`]) with car-following
//!   traffic and exact geometric occlusion.
//!
//! [`harness`] drives both from TOML experiment files and writes CSV tables.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod association;
pub mod coverage;
pub mod error;
pub mod harness;
pub mod interference;
pub mod mcsim;
pub mod numerics;
pub mod scenario;

pub use error::{Error, Result};
