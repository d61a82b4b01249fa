//! Quadrature, root finding and special functions shared by every other module.

pub mod quadrature;
pub mod roots;
pub mod special;

pub use quadrature::{integrate, integrate_pieces, Quadrature, QuadratureSpec, Transform};
pub use roots::{bracket_decreasing, expand_bracket, find_root, RootSpec};
pub use special::{beta, digamma, gamma, inc_beta, inc_beta_inv, inc_beta_pair, ln_beta, ln_gamma, trigamma};
