//! Maximum quantum violations of the n-party, two-setting, two-outcome
//! family of CH-type Bell inequalities.
//!
//! The inequality family is
//!
//! ```text
//! P(a_11=1, …, a_n1=1) ≤ P(a_12=1, …, a_n2=1) + Σ_l P(a_l2=−1, a_m1=1 for m≠l)
//! ```
//!
//! and its Bell operator `B_n` is built from one qubit per party with the
//! setting-1 projector `|0⟩⟨0|` and the setting-2 projector `|u₊⟩⟨u₊|`,
//! `⟨0|u₊⟩ = x_l`. The overlap cosines `x_l` are the only free parameters.
//!
//! Modules:
//! - [`linalg`]: complex matrices, Kronecker products, Hermitian eigensolvers,
//!   polynomial roots.
//! - [`bell`]: Bell operators, reduced matrices, characteristic polynomials.
//! - [`optimize`]: maximization of the largest eigenvalue over overlaps.
//! - [`lhv`]: deterministic local strategies and the three-party game.
//! - [`states`]: named optimal states, measurements and correlation checks.
//! - [`verify`]: the cross-module verification suite.
//! - [`cli`]: command-line rendering shared by the binary.

pub mod bell;
pub mod cli;
pub mod error;
pub mod lhv;
pub mod linalg;
pub mod optimize;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
