//! Front end for `tailex-core`: parsing of model, scaler and measure strings, convergence tables, coefficient
//! ledgers and verification suites.

pub mod report;
pub mod spec;
pub mod verify;
