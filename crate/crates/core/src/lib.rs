//! Walks on ordinals, oscillation maps, tree-branch colorings, Δ-system
//! extraction maps and the colorings built from them, at countable scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`ordinal`], [`closed_set`] and [`cseq`] give exact Cantor-normal-form
//!   arithmetic and the symbolic sets `C_β` a walk descends along;
//! * [`walks`] and [`oscillation`] compute traces, `λ₂`, the landing ordinal,
//!   `ρ`, `χ` and oscillation counts;
//! * [`branches`], [`extraction`], [`cube`] and [`magma`] build the pair,
//!   triple and finite-set colorings;
//! * [`harness`] runs seeded coverage experiments and invariant suites.

pub mod branches;
pub mod closed_set;
pub mod cseq;
pub mod cube;
pub mod error;
pub mod extraction;
pub mod harness;
pub mod magma;
pub mod ordinal;
pub mod oscillation;
pub mod sample;
pub mod walks;

pub use closed_set::{Block, ClosedSet, SetKind};
pub use cseq::{CSequence, Provider, ProviderMode};
pub use error::{Error, Result};
pub use ordinal::{Kind, Ordinal};
pub use walks::{WalkTrace, Rho};
