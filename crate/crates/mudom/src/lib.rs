//! Membership oracles, μ computation, boundary checks, separation
//! certificates and Schwarz-lemma tests for the μ-synthesis domains
//! G/Γ_E(3;3;1,1,1) ⊂ C⁷ and G/Γ_E(3;2;1,2) ⊂ C⁵.
//!
//! Every oracle returns a [`core_types::Verdict`] with a signed margin so
//! that borderline answers are reported as such instead of being rounded to
//! a yes or a no. Random sampling is reproducible: each seed feeds a
//! ChaCha20 stream (`rand_chacha`).
#![allow(non_snake_case)]

pub mod boundary;
pub mod cli;
pub mod core_types;
pub mod domain312;
pub mod domain333;
pub mod error;
pub mod geometry;
pub mod realization;
pub mod schwarz;
pub mod tetrablock;

pub use error::{MudomError, Result};
