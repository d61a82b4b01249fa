//! Higher-order tail asymptotics for scaled risks.
//!
//! The crate evaluates first-, second- and third-order approximations of
//! Weyl-type tail integrals `E[X^κ 1{SX > x}]`, deflated tails, Haezendonck-Goovaerts
//! risk measures and expectiles, together with the exact numerical oracles used to
//! validate them. Everything here is `no_std` + `alloc`; float math goes through `libm`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod numerics;
pub mod risk_measures;
pub mod rv_kernel;
pub mod scalers;
pub mod tail_models;
pub mod weyl_engine;

pub use error::{Error, Result};
