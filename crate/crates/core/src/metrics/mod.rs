//! Metric and topological diagnostics for the Gelfond-Lifschitz operator.
//!
//! Level mappings induce the ultrametric `d_l(I, J) = 2^-β`, where `β` is the
//! least level on which `I` and `J` disagree, and its dislocated variant `ρ`
//! anchored at a fixed interpretation. On top of these sit strict-contraction
//! checks, fixed-point iteration traces, continuity witnesses for the Cantor
//! topology and the embedding of interpretations into the Cantor set.

mod cantor;
mod continuity;
mod contraction;
mod distance;
mod iterate;
mod levels;

pub use cantor::{cantor_decode, cantor_embed};
pub use continuity::{
    continuity_witness, continuity_witness_with, validate_witness, ContinuityWitness,
    DEFAULT_PER_SIZE_CAP,
};
pub use contraction::{
    contraction_report, ContractionReport, ContractionViolation, Metric, PairMode, DEFAULT_PAIR_CAP,
};
pub use distance::{dl_distance, rho_distance, LevelDistance};
pub use iterate::{iterate_gl, IterationOutcome, IterationTrace};
pub use levels::{
    check_locally_hierarchical, find_local_stratification, level_from_fitting, LevelMapping,
    NegativeCycle,
};
