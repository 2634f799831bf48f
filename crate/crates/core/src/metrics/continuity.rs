use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::operators::{gl_operator, gl_transform, least_model, Interpretation};
use crate::syntax::{AtomId, GroundProgram};

/// Candidate sets tried per size before falling back to a greedy cover.
pub const DEFAULT_PER_SIZE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuityWitness {
    /// No clause has the probed atom as head.
    NoClause,
    /// Atoms true in the probed interpretation; every clause for the probed
    /// atom negates one of them or has a positive body atom false in `GL(I)`.
    WitnessSet(Vec<AtomId>),
    /// No witness of at most `bound` atoms was found.
    Exhausted { bound: usize },
}

/// Searches for a finite set `S ⊆ i` explaining why `a` is false in `GL(i)`
/// robustly: every interpretation agreeing with `i` on `S` keeps `a` false.
/// Smallest sets are tried first.
pub fn continuity_witness(
    g: &GroundProgram,
    i: &Interpretation,
    a: AtomId,
    bound: usize,
) -> Result<ContinuityWitness> {
    continuity_witness_with(g, i, a, bound, DEFAULT_PER_SIZE_CAP)
}

pub fn continuity_witness_with(
    g: &GroundProgram,
    i: &Interpretation,
    a: AtomId,
    bound: usize,
    per_size_cap: usize,
) -> Result<ContinuityWitness> {
    let image = gl_operator(g, i);
    if image.contains(a) {
        return Err(Error::Precondition(format!(
            "{} is true in GL(I)",
            g.base().atom(a)
        )));
    }
    let heads = g.clauses_with_head(a);
    if heads.is_empty() {
        return Ok(ContinuityWitness::NoClause);
    }

    // clauses not already blocked by a positive atom false in GL(i); each must
    // be hit by a negated atom of S
    let mut needs: Vec<Vec<AtomId>> = Vec::new();
    for &k in heads {
        let c = g.clause(k);
        if c.pos.iter().any(|&b| !image.contains(b)) {
            continue;
        }
        let hitters: Vec<AtomId> = c.neg.iter().copied().filter(|&b| i.contains(b)).collect();
        if hitters.is_empty() {
            // the clause would fire in the reduct; only possible on truncated
            // groundings where the probe is not meaningful
            return Ok(ContinuityWitness::Exhausted { bound });
        }
        needs.push(hitters);
    }
    let hits_all = |s: &[AtomId]| needs.iter().all(|h| h.iter().any(|b| s.contains(b)));

    let candidates: Vec<AtomId> = needs
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for size in 0..=bound.min(candidates.len()) {
        let found = candidates
            .iter()
            .copied()
            .combinations(size)
            .take(per_size_cap)
            .find(|s| hits_all(s));
        if let Some(s) = found {
            return Ok(ContinuityWitness::WitnessSet(s));
        }
    }

    let greedy: Vec<AtomId> = needs
        .iter()
        .map(|h| h[0])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if greedy.len() <= bound {
        return Ok(ContinuityWitness::WitnessSet(greedy));
    }
    Ok(ContinuityWitness::Exhausted { bound })
}

/// Re-checks a witness set by a direct scan of the clauses for `a`, with
/// `GL(i)` recomputed from the materialised reduct.
pub fn validate_witness(g: &GroundProgram, i: &Interpretation, a: AtomId, s: &[AtomId]) -> bool {
    if !s.iter().all(|&b| i.contains(b)) {
        return false;
    }
    let image = least_model(&gl_transform(g, i));
    if image.contains(a) {
        return false;
    }
    g.clauses()
        .iter()
        .filter(|c| c.head == a)
        .all(|c| c.neg.iter().any(|b| s.contains(b)) || c.pos.iter().any(|&b| !image.contains(b)))
}
