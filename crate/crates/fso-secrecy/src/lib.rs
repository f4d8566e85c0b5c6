//! Secrecy-capacity analysis for free-space optical links with on-off keying
//! and hard threshold detection, under correlated log-normal turbulence.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: special functions, binary entropy, bracketed scalar
//!   maximization, adaptive 2-D quadrature.
//! - [`channel`]: the single-receiver link model: link budget, crossover
//!   probabilities of the threshold detector, mutual information, capacity
//!   for a fixed fading state.
//! - [`fading`]: log-normal turbulence statistics: marginal and correlated
//!   bivariate densities, Rytov-variance budgeting, correlation-coefficient
//!   conversions, and a deterministic correlated sampler.
//! - [`secrecy`]: instantaneous secrecy quantities for a fixed fading pair:
//!   the definitional secrecy capacity, fixed-threshold secrecy rates, the
//!   closed-form lower bound, and the optimal-threshold verifier.
//! - [`average`]: ergodic (average) secrecy quantities by adaptive
//!   quadrature with Monte Carlo cross-validation.
//! - [`cli`]: parameter sweeps, CSV emission, plot-script generation and
//!   the verification suites behind the `fso-secrecy` binary.
//!
//! Every computation is deterministic: random draws are seeded explicitly
//! and chunked so results do not depend on the number of worker threads.

// `!(x > 0.0)`-style guards are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Ported special-function coefficients and frozen oracle values keep their
// canonical digits.
#![allow(clippy::excessive_precision)]

pub mod average;
pub mod channel;
pub mod cli;
mod error;
pub mod fading;
pub mod numerics;
mod rng;
pub mod secrecy;

pub use error::{Error, Result};
