//! Semantics engine for normal logic programs built around the fixpoint
//! completion.
//!
//! * [`syntax`]: parsing and depth-bounded grounding.
//! * [`operators`]: immediate consequence, Gelfond-Lifschitz and Fitting
//!   operators.
//! * [`fixcomp`]: the unfolding operator, the fixpoint completion and Clark
//!   completion.
//! * [`semantics`]: supported, stable and well-founded models along
//!   independent routes, plus checking harnesses and a corpus generator.
//! * [`metrics`]: level mappings, ultrametric distances, contraction and
//!   continuity diagnostics, and the Cantor-set embedding.

pub mod error;
pub mod fixcomp;
pub mod metrics;
pub mod operators;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
