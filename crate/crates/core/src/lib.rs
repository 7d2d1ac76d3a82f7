//! Simulator for the quantum multi-pass padlock key exchange.
//!
//! [`qcore`] holds the state-vector and density-matrix primitives,
//! [`protocol`] the parties, pass schedule and sessions, [`adversary`] the
//! eavesdropper toolbox and attacks, [`analysis`] the statistics and
//! [`harness`] the experiment runner and CLI.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod qcore;

pub use error::{Error, Result};

// The guide's snippets run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/padlocks.md")]
    mod padlocks {}
    #[doc = include_str!("../../../book/src/sessions.md")]
    mod sessions {}
    #[doc = include_str!("../../../book/src/eavesdroppers.md")]
    mod eavesdroppers {}
    #[doc = include_str!("../../../book/src/measuring.md")]
    mod measuring {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/findings.md")]
    mod findings {}
}
