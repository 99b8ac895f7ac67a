//! Discrete bilinear Radon transforms along arithmetic functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] sieves arithmetic function tables (φ, π, d, μ, Ω, ω) and
//!   extends them to nonzero integers with an even or sign-odd rule.
//! * [`census`] counts value collisions of such functions over dyadic strips.
//! * [`kernel`] builds the odd dyadic cutoff `ρ` and the scale pieces
//!   `σ_j` / `T_j` of the transform.
//! * [`signal`] holds the input sequences `f`, `g`.
//! * [`transform`] evaluates the truncated transform with a certified tail.
//! * [`probe`] measures level sets, the `V` functional and the maximal
//!   operator.
//!
//! Data-parallel loops go through [`par`]; with the `parallel` feature
//! disabled every loop runs sequentially and produces identical output.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod census;
mod error;
pub mod kernel;
pub mod par;
pub mod probe;
pub mod signal;
pub mod transform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
