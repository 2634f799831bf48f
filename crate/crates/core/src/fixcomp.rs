//! Quasi-interpretations, the unfolding operator `T'_P`, the fixpoint
//! completion `fix(P)` and the Clark completion of negative-body programs.
//!
//! A quasi-interpretation is a set of ground clauses `A :- not B1, ..., not Bm`.
//! Unfolding a program clause replaces each positive body atom `Ai` by the
//! body of some quasi-clause with head `Ai`. Iterating from the empty set
//! reaches `fix(P)`, the program whose immediate consequence operator is the
//! Gelfond-Lifschitz operator of `P`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use itertools::Itertools;

use crate::error::{Error, Result};
use crate::operators::Interpretation;
use crate::syntax::{AtomEnumeration, AtomId, GroundClause, GroundProgram};

/// `head :- not b1, ..., not bm`, negative body kept as a sorted set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiClause {
    pub head: AtomId,
    pub neg: Vec<AtomId>,
}

impl QuasiClause {
    pub fn new(head: AtomId, neg: impl IntoIterator<Item = AtomId>) -> Self {
        let mut neg: Vec<_> = neg.into_iter().collect();
        neg.sort_unstable();
        neg.dedup();
        Self { head, neg }
    }

    fn to_ground(&self) -> GroundClause {
        GroundClause {
            head: self.head,
            pos: Vec::new(),
            neg: self.neg.clone(),
        }
    }
}

/// A finite set of quasi-clauses over a shared atom enumeration, in insertion
/// order. Equality is set equality.
#[derive(Debug, Clone)]
pub struct QuasiInterpretation {
    base: Arc<AtomEnumeration>,
    clauses: IndexSet<QuasiClause>,
}

impl PartialEq for QuasiInterpretation {
    fn eq(&self, other: &Self) -> bool {
        *self.base == *other.base && self.clauses == other.clauses
    }
}

impl Eq for QuasiInterpretation {}

impl QuasiInterpretation {
    pub fn empty(base: Arc<AtomEnumeration>) -> Self {
        Self {
            base,
            clauses: IndexSet::new(),
        }
    }

    pub fn from_clauses(
        base: Arc<AtomEnumeration>,
        clauses: impl IntoIterator<Item = QuasiClause>,
    ) -> Self {
        Self {
            base,
            clauses: clauses.into_iter().collect(),
        }
    }

    /// Quasi-interpretation with the clauses of `g`, which must have no
    /// positive body atoms.
    pub fn from_ground(g: &GroundProgram) -> Option<Self> {
        g.clauses().iter().all(|c| c.pos.is_empty()).then(|| {
            Self::from_clauses(
                g.shared_base(),
                g.clauses()
                    .iter()
                    .map(|c| QuasiClause::new(c.head, c.neg.iter().copied())),
            )
        })
    }

    pub fn base(&self) -> &AtomEnumeration {
        &self.base
    }

    pub fn shared_base(&self) -> Arc<AtomEnumeration> {
        Arc::clone(&self.base)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QuasiClause> {
        self.clauses.iter()
    }

    pub fn contains(&self, clause: &QuasiClause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn insert(&mut self, clause: QuasiClause) -> bool {
        self.clauses.insert(clause)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.clauses.is_subset(&other.clauses)
    }

    /// Copy without the `k`-th clause (insertion order).
    pub fn without(&self, k: usize) -> Self {
        let mut clauses = self.clauses.clone();
        clauses.shift_remove_index(k);
        Self {
            base: self.shared_base(),
            clauses,
        }
    }

    /// The first `len` clauses in insertion order.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            base: self.shared_base(),
            clauses: self.clauses.iter().take(len).cloned().collect(),
        }
    }

    /// Heads of the clauses with empty body.
    pub fn facts(&self) -> Interpretation {
        Interpretation::from_atoms(
            self.base.len(),
            self.clauses
                .iter()
                .filter(|c| c.neg.is_empty())
                .map(|c| c.head),
        )
    }

    /// Drops every clause whose body strictly contains the body of another
    /// clause with the same head. Only meant for display; the result is not
    /// the fixpoint completion.
    pub fn subsumption_reduced(&self) -> Self {
        let subsumed = |c: &QuasiClause| {
            self.clauses.iter().any(|d| {
                d.head == c.head
                    && d.neg.len() < c.neg.len()
                    && d.neg.iter().all(|b| c.neg.binary_search(b).is_ok())
            })
        };
        Self {
            base: self.shared_base(),
            clauses: self
                .clauses
                .iter()
                .filter(|c| !subsumed(c))
                .cloned()
                .collect(),
        }
    }

    fn clauses_by_head(&self) -> Vec<Vec<&QuasiClause>> {
        let mut by_head = vec![Vec::new(); self.base.len()];
        for c in &self.clauses {
            by_head[c.head.0].push(c);
        }
        by_head
    }
}

impl fmt::Display for QuasiInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", c.to_ground().display(&self.base))?;
        }
        Ok(())
    }
}

/// Reads a quasi-interpretation as a ground program over the same base, so
/// that the two-valued and three-valued operators apply to it.
pub fn quasi_as_ground(q: &QuasiInterpretation) -> GroundProgram {
    GroundProgram::new(
        q.shared_base(),
        q.clauses.iter().map(QuasiClause::to_ground),
    )
}

/// Unfolds one clause of `g` against the candidate bodies for each of its
/// positive atoms, pushing every resulting quasi-clause.
fn unfold_into(clause: &GroundClause, choices: &[Vec<&[AtomId]>], out: &mut Vec<QuasiClause>) {
    for bodies in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
        let neg = bodies
            .into_iter()
            .flat_map(|b| b.iter().copied())
            .chain(clause.neg.iter().copied());
        out.push(QuasiClause::new(clause.head, neg));
    }
}

/// One application of the unfolding operator: every clause of `g` whose
/// positive body atoms all head some clause of `q`, with each positive atom
/// replaced by such a body.
pub fn tprime_step(g: &GroundProgram, q: &QuasiInterpretation) -> QuasiInterpretation {
    let by_head = q.clauses_by_head();
    let mut out = Vec::new();
    for clause in g.clauses() {
        if clause.pos.is_empty() {
            out.push(QuasiClause::new(clause.head, clause.neg.iter().copied()));
            continue;
        }
        let choices: Vec<Vec<&[AtomId]>> = clause
            .pos
            .iter()
            .map(|a| by_head[a.0].iter().map(|c| c.neg.as_slice()).collect())
            .collect();
        unfold_into(clause, &choices, &mut out);
    }
    QuasiInterpretation::from_clauses(g.shared_base(), out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixcompOptions {
    pub max_iterations: usize,
    pub max_clauses: usize,
}

impl Default for FixcompOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            max_clauses: 1 << 22,
        }
    }
}

/// The fixpoint completion of a ground program.
#[derive(Debug, Clone)]
pub struct Completion {
    fix: QuasiInterpretation,
    /// `iterate_sizes[n]` is the number of clauses of the `n`-th iterate; the
    /// iterates are prefixes of `fix` in insertion order.
    iterate_sizes: Vec<usize>,
    grounding_bound: usize,
    exact: bool,
}

impl Completion {
    pub fn fix(&self) -> &QuasiInterpretation {
        &self.fix
    }

    pub fn into_fix(self) -> QuasiInterpretation {
        self.fix
    }

    /// Number of applications of `T'` performed; the last one produced no new
    /// clause.
    pub fn stabilized_at(&self) -> usize {
        self.iterate_sizes.len() - 1
    }

    /// The `n`-th iterate `T'↑n` (clamped to the fixed point).
    pub fn iterate(&self, n: usize) -> QuasiInterpretation {
        let n = n.min(self.iterate_sizes.len() - 1);
        self.fix.prefix(self.iterate_sizes[n])
    }

    /// Grounding depth bound of the input program.
    pub fn grounding_bound(&self) -> usize {
        self.grounding_bound
    }

    /// False when the input was a truncated grounding.
    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

pub fn fixpoint_completion(g: &GroundProgram) -> Result<Completion> {
    fixpoint_completion_with(g, &FixcompOptions::default())
}

/// Iterates the unfolding operator from the empty quasi-interpretation until
/// an application adds nothing.
///
/// Semi-naive: in round `n + 1` only unfoldings using at least one clause
/// added in round `n` are generated, which yields exactly the new clauses of
/// `T'(T'↑n)` because the iterates increase.
pub fn fixpoint_completion_with(g: &GroundProgram, options: &FixcompOptions) -> Result<Completion> {
    let n_atoms = g.atom_count();
    let mut fix: IndexSet<QuasiClause> = IndexSet::new();
    // clause indices into `fix`, per head
    let mut by_head: Vec<Vec<usize>> = vec![Vec::new(); n_atoms];
    let mut iterate_sizes = vec![0usize];
    let mut delta_start = 0usize;
    let mut applications = 0usize;

    loop {
        if applications == options.max_iterations {
            return Err(Error::IterationCap {
                what: "fixpoint completion",
                cap: options.max_iterations,
            });
        }
        applications += 1;

        let mut produced = Vec::new();
        if applications == 1 {
            for clause in g.clauses().iter().filter(|c| c.pos.is_empty()) {
                produced.push(QuasiClause::new(clause.head, clause.neg.iter().copied()));
            }
        } else {
            for clause in g.clauses().iter().filter(|c| !c.pos.is_empty()) {
                // the first position drawing from the last round's clauses
                for pivot in 0..clause.pos.len() {
                    let choices: Option<Vec<Vec<&[AtomId]>>> = clause
                        .pos
                        .iter()
                        .enumerate()
                        .map(|(j, a)| {
                            let pick: Vec<&[AtomId]> = by_head[a.0]
                                .iter()
                                .filter(|&&k| match j.cmp(&pivot) {
                                    std::cmp::Ordering::Less => k < delta_start,
                                    std::cmp::Ordering::Equal => k >= delta_start,
                                    std::cmp::Ordering::Greater => true,
                                })
                                .map(|&k| fix[k].neg.as_slice())
                                .collect();
                            (!pick.is_empty()).then_some(pick)
                        })
                        .collect();
                    if let Some(choices) = choices {
                        unfold_into(clause, &choices, &mut produced);
                    }
                }
            }
        }

        let before = fix.len();
        for clause in produced {
            let head = clause.head;
            let (k, added) = fix.insert_full(clause);
            if added {
                by_head[head.0].push(k);
            }
        }
        if fix.len() > options.max_clauses {
            return Err(Error::IterationCap {
                what: "fixpoint completion (clause budget)",
                cap: options.max_clauses,
            });
        }
        iterate_sizes.push(fix.len());
        if fix.len() == before {
            break;
        }
        delta_start = before;
    }

    Ok(Completion {
        fix: QuasiInterpretation {
            base: g.shared_base(),
            clauses: fix,
        },
        iterate_sizes,
        grounding_bound: g.grounding_bound(),
        exact: g.is_exact(),
    })
}

/// Clark completion of a negative-body program: for each atom `A` of the
/// base, `A ↔ ∨_clauses ∧_j ¬B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionFormula {
    base: Arc<AtomEnumeration>,
    /// One entry per atom; each disjunct lists the negated atoms of one clause.
    definitions: Vec<Vec<Vec<AtomId>>>,
}

impl CompletionFormula {
    pub fn base(&self) -> &AtomEnumeration {
        &self.base
    }

    pub fn definition(&self, atom: AtomId) -> &[Vec<AtomId>] {
        &self.definitions[atom.0]
    }

    /// `true` iff `i` satisfies every biconditional.
    pub fn holds(&self, i: &Interpretation) -> bool {
        self.definitions.iter().enumerate().all(|(k, disjuncts)| {
            let rhs = disjuncts
                .iter()
                .any(|conj| conj.iter().all(|&b| !i.contains(b)));
            i.contains(AtomId(k)) == rhs
        })
    }
}

impl fmt::Display for CompletionFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (atom, disjuncts) in self.base.ids().zip(&self.definitions) {
            let rhs = if disjuncts.is_empty() {
                "false".to_string()
            } else {
                disjuncts
                    .iter()
                    .map(|conj| {
                        if conj.is_empty() {
                            "true".to_string()
                        } else {
                            conj.iter()
                                .map(|&b| format!("not {}", self.base.atom(b)))
                                .join(" & ")
                        }
                    })
                    .join(" | ")
            };
            writeln!(f, "{} <-> {}", self.base.atom(atom), rhs)?;
        }
        Ok(())
    }
}

pub fn clark_completion(q: &QuasiInterpretation) -> CompletionFormula {
    let mut definitions = vec![Vec::new(); q.base.len()];
    for c in &q.clauses {
        definitions[c.head.0].push(c.neg.clone());
    }
    CompletionFormula {
        base: q.shared_base(),
        definitions,
    }
}

/// Every interpretation satisfying the completion, by truth-table
/// enumeration. Refuses bases larger than `max_atoms`.
pub fn completion_models(
    c: &CompletionFormula,
    max_atoms: usize,
) -> Result<BTreeSet<Interpretation>> {
    let n = c.base.len();
    if n > max_atoms {
        return Err(Error::CapExceeded {
            atoms: n,
            cap: max_atoms,
        });
    }
    Ok(Interpretation::enumerate(n)
        .filter(|i| c.holds(i))
        .collect())
}
