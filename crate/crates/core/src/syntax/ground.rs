//! Ground programs and depth-bounded grounding.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use itertools::Itertools;
use log::warn;

use crate::error::{Error, Result};

use super::{Atom, Clause, Program, Term};

/// Upper bound on the number of clause instances [`ground_program`] will
/// generate.
pub const DEFAULT_INSTANCE_CAP: u128 = 2_000_000;

const FRESH_CONSTANT: &str = "c0";

/// Index of a ground atom in an [`AtomEnumeration`] (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

impl AtomId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Bijection between the ground atoms in play and `0..len`.
///
/// Atoms are numbered in the order they are registered. The numbering is the
/// default level mapping and fixes the digit order of the Cantor embedding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomEnumeration {
    atoms: IndexSet<Atom>,
}

impl AtomEnumeration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut e = Self::new();
        for atom in atoms {
            e.register(atom);
        }
        e
    }

    /// Returns the id of `atom`, registering it first if it is new.
    pub fn register(&mut self, atom: Atom) -> AtomId {
        debug_assert!(atom.is_ground(), "non-ground atom {atom}");
        AtomId(self.atoms.insert_full(atom).0)
    }

    pub fn id(&self, atom: &Atom) -> Option<AtomId> {
        self.atoms.get_index_of(atom).map(AtomId)
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.0]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> {
        (0..self.len()).map(AtomId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &Atom)> {
        self.atoms.iter().enumerate().map(|(k, a)| (AtomId(k), a))
    }

    /// `{a, b}` with atom texts sorted, the canonical printed form of a set of
    /// atoms.
    pub fn render_set(&self, ids: impl IntoIterator<Item = AtomId>) -> String {
        let mut names: Vec<String> = ids
            .into_iter()
            .map(|id| self.atom(id).to_string())
            .collect();
        names.sort();
        format!("{{{}}}", names.join(", "))
    }
}

/// A ground clause `head :- pos, not neg.` with both bodies kept as sorted,
/// duplicate-free id lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundClause {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl GroundClause {
    pub fn new(
        head: AtomId,
        pos: impl IntoIterator<Item = AtomId>,
        neg: impl IntoIterator<Item = AtomId>,
    ) -> Self {
        let mut pos: Vec<_> = pos.into_iter().collect();
        let mut neg: Vec<_> = neg.into_iter().collect();
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        Self { head, pos, neg }
    }

    pub fn is_definite(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        std::iter::once(self.head)
            .chain(self.pos.iter().copied())
            .chain(self.neg.iter().copied())
    }

    pub fn display<'a>(&'a self, base: &'a AtomEnumeration) -> impl fmt::Display + 'a {
        DisplayClause { clause: self, base }
    }
}

struct DisplayClause<'a> {
    clause: &'a GroundClause,
    base: &'a AtomEnumeration,
}

impl fmt::Display for DisplayClause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.clause;
        write!(f, "{}", self.base.atom(c.head))?;
        let body = c
            .pos
            .iter()
            .map(|&a| self.base.atom(a).to_string())
            .chain(c.neg.iter().map(|&a| format!("not {}", self.base.atom(a))));
        let body = body.collect::<Vec<_>>();
        if !body.is_empty() {
            write!(f, " :- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// A finite set of ground clauses over a shared atom enumeration.
///
/// The base may contain atoms that occur in no clause; every atom occurring
/// in a clause is in the base. Clauses are deduplicated, first occurrence
/// wins.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    base: Arc<AtomEnumeration>,
    clauses: Vec<GroundClause>,
    by_head: Vec<Vec<usize>>,
    pos_occurrences: Vec<Vec<usize>>,
    neg_occurrences: Vec<Vec<usize>>,
    grounding_bound: usize,
    exact: bool,
}

impl GroundProgram {
    /// # Panics
    ///
    /// If a clause mentions an atom id outside the base.
    pub fn new(
        base: Arc<AtomEnumeration>,
        clauses: impl IntoIterator<Item = GroundClause>,
    ) -> Self {
        let n = base.len();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for clause in clauses {
            assert!(
                clause.atoms().all(|a| a.0 < n),
                "clause refers to an atom outside the base"
            );
            if seen.insert(clause.clone()) {
                kept.push(clause);
            }
        }
        let mut by_head = vec![Vec::new(); n];
        let mut pos_occurrences = vec![Vec::new(); n];
        let mut neg_occurrences = vec![Vec::new(); n];
        for (k, c) in kept.iter().enumerate() {
            by_head[c.head.0].push(k);
            c.pos.iter().for_each(|a| pos_occurrences[a.0].push(k));
            c.neg.iter().for_each(|a| neg_occurrences[a.0].push(k));
        }
        Self {
            base,
            clauses: kept,
            by_head,
            pos_occurrences,
            neg_occurrences,
            grounding_bound: 0,
            exact: true,
        }
    }

    /// Tags the program with the grounding depth bound it was built with.
    pub fn with_grounding(mut self, bound: usize, exact: bool) -> Self {
        self.grounding_bound = bound;
        self.exact = exact;
        self
    }

    pub fn base(&self) -> &AtomEnumeration {
        &self.base
    }

    pub fn shared_base(&self) -> Arc<AtomEnumeration> {
        Arc::clone(&self.base)
    }

    pub fn atom_count(&self) -> usize {
        self.base.len()
    }

    pub fn clauses(&self) -> &[GroundClause] {
        &self.clauses
    }

    pub fn clause(&self, k: usize) -> &GroundClause {
        &self.clauses[k]
    }

    /// Indices of the clauses with head `atom`.
    pub fn clauses_with_head(&self, atom: AtomId) -> &[usize] {
        &self.by_head[atom.0]
    }

    /// Indices of the clauses with `atom` in the positive body.
    pub fn pos_occurrences(&self, atom: AtomId) -> &[usize] {
        &self.pos_occurrences[atom.0]
    }

    /// Indices of the clauses with `atom` in the negative body.
    pub fn neg_occurrences(&self, atom: AtomId) -> &[usize] {
        &self.neg_occurrences[atom.0]
    }

    pub fn grounding_bound(&self) -> usize {
        self.grounding_bound
    }

    /// False when grounding dropped instances (function symbols together with
    /// variables make `ground(P)` infinite).
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_definite(&self) -> bool {
        self.clauses.iter().all(GroundClause::is_definite)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Same base, clause list replaced.
    pub fn with_clauses(&self, clauses: impl IntoIterator<Item = GroundClause>) -> Self {
        GroundProgram::new(self.shared_base(), clauses)
            .with_grounding(self.grounding_bound, self.exact)
    }

    /// Clause set as atom-level triples, independent of the enumeration.
    pub fn clause_set(&self) -> HashSet<(Atom, Vec<Atom>, Vec<Atom>)> {
        let name = |ids: &[AtomId]| {
            let mut v: Vec<Atom> = ids.iter().map(|&a| self.base.atom(a).clone()).collect();
            v.sort();
            v
        };
        self.clauses
            .iter()
            .map(|c| (self.base.atom(c.head).clone(), name(&c.pos), name(&c.neg)))
            .collect()
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", c.display(&self.base))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundingOptions {
    /// Maximum depth of any argument term in the produced instances.
    pub depth_bound: usize,
    pub max_instances: u128,
}

impl Default for GroundingOptions {
    fn default() -> Self {
        Self {
            depth_bound: 0,
            max_instances: DEFAULT_INSTANCE_CAP,
        }
    }
}

/// Grounds `program` with every argument term of depth at most `depth_bound`.
pub fn ground_program(program: &Program, depth_bound: usize) -> Result<GroundProgram> {
    ground_program_with(
        program,
        &GroundingOptions {
            depth_bound,
            ..GroundingOptions::default()
        },
    )
}

pub fn ground_program_with(program: &Program, options: &GroundingOptions) -> Result<GroundProgram> {
    let symbols = program.symbols();
    let has_vars = !program.is_ground();
    let mut constants = symbols.constants.clone();
    if constants.is_empty() && has_vars {
        warn!("program has variables but no constants; grounding over fresh constant `{FRESH_CONSTANT}`");
        constants.push(FRESH_CONSTANT.to_string());
    }

    let universe = if has_vars {
        herbrand_universe(&constants, &symbols.functors, options)?
    } else {
        Vec::new()
    };

    let estimate = program
        .clauses()
        .iter()
        .map(|c| saturating_pow(universe.len() as u128, c.variables().len()))
        .fold(0u128, u128::saturating_add);
    if estimate > options.max_instances {
        return Err(Error::GroundingTooLarge {
            estimate,
            cap: options.max_instances,
        });
    }

    let mut base = AtomEnumeration::new();
    let mut clauses = Vec::new();
    for clause in program.clauses() {
        let vars = clause.variables();
        if vars.is_empty() {
            clauses.push(register_clause(&mut base, clause));
            continue;
        }
        for tuple in (0..vars.len())
            .map(|_| universe.iter())
            .multi_cartesian_product()
        {
            let subst: HashMap<&str, &Term> = vars.iter().copied().zip(tuple).collect();
            let instance = clause.substitute(&subst);
            let within_bound = std::iter::once(&instance.head)
                .chain(instance.body.iter().map(|l| &l.atom))
                .all(|a| a.max_term_depth() <= options.depth_bound);
            if within_bound {
                clauses.push(register_clause(&mut base, &instance));
            }
        }
    }

    let exact = !(has_vars && !symbols.functors.is_empty());
    Ok(GroundProgram::new(Arc::new(base), clauses).with_grounding(options.depth_bound, exact))
}

fn register_clause(base: &mut AtomEnumeration, clause: &Clause) -> GroundClause {
    let head = base.register(clause.head.clone());
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for lit in &clause.body {
        let id = base.register(lit.atom.clone());
        if lit.negated {
            neg.push(id);
        } else {
            pos.push(id);
        }
    }
    GroundClause::new(head, pos, neg)
}

fn saturating_pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// All ground terms of depth at most the bound, shallower terms first.
fn herbrand_universe(
    constants: &[String],
    functors: &[(String, usize)],
    options: &GroundingOptions,
) -> Result<Vec<Term>> {
    let mut universe: IndexSet<Term> = constants.iter().cloned().map(Term::Const).collect();
    for _ in 0..options.depth_bound {
        let size = functors
            .iter()
            .map(|(_, arity)| saturating_pow(universe.len() as u128, *arity))
            .fold(universe.len() as u128, u128::saturating_add);
        if size > options.max_instances {
            return Err(Error::GroundingTooLarge {
                estimate: size,
                cap: options.max_instances,
            });
        }
        let previous: Vec<Term> = universe.iter().cloned().collect();
        for (name, arity) in functors {
            for args in (0..*arity)
                .map(|_| previous.iter())
                .multi_cartesian_product()
            {
                universe.insert(Term::Compound(
                    name.clone(),
                    args.into_iter().cloned().collect(),
                ));
            }
        }
    }
    Ok(universe.into_iter().collect())
}

/// Indices of clauses with a body variable that does not occur in the head.
pub fn local_variable_clauses(program: &Program) -> Vec<usize> {
    program
        .clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.local_variables().is_empty())
        .map(|(k, _)| k)
        .collect()
}

pub fn has_local_variables(program: &Program) -> bool {
    !local_variable_clauses(program).is_empty()
}
