//! Shortest representations of integers as signed sums of powers over a union
//! of bases, such as `19 = -1 - 5 + 25` over `{2, 5}`.
//!
//! - [`digits`]: balanced single-base expansions (non-adjacent form for base 2).
//! - [`search`]: exact minimal length over several bases, with certificates.
//! - [`diophantine`]: two-term exponential equations, modular obstructions and
//!   the lower-bound proofs built from them.
//! - [`sets`]: the structure sets Q, S and T.
//! - [`lambda`]: the smallest integer of each length, and the census over `{2, n}`.
//! - [`verify`]: the claim registry and its reproduction report.

pub mod bases;
pub mod digits;
pub mod diophantine;
pub mod error;
pub mod lambda;
pub mod search;
pub mod sets;
pub mod term;
pub mod verify;

pub use bases::Bases;
pub use error::{Error, Result};
