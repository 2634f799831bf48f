//! Normal logic programs: terms, atoms, clauses, the `.lp` surface syntax and
//! depth-bounded grounding.
//!
//! A source [`Program`] keeps clauses exactly as written. [`ground_program`]
//! instantiates it over the Herbrand universe (truncated at a term-depth
//! bound) and produces a [`GroundProgram`] whose atoms are numbered by an
//! [`AtomEnumeration`]. Every operator in the crate works on ground programs.

mod ground;
mod parser;

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};

pub use ground::{
    ground_program, ground_program_with, has_local_variables, local_variable_clauses,
    AtomEnumeration, AtomId, GroundClause, GroundProgram, GroundingOptions, DEFAULT_INSTANCE_CAP,
};
pub use parser::{parse_atom, parse_program};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Compound(String, Vec<Term>),
}

impl Term {
    /// Constants and variables have depth 0, a compound term is one deeper
    /// than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    fn substitute(&self, subst: &HashMap<&str, &Term>) -> Term {
        match self {
            Term::Var(v) => subst
                .get(v.as_str())
                .map(|t| (*t).clone())
                .unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|t| t.substitute(subst)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) | Term::Const(name) => f.write_str(name),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_comma_separated(f, args)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Depth of the deepest argument term (0 for propositional atoms).
    pub fn max_term_depth(&self) -> usize {
        self.args.iter().map(Term::depth).max().unwrap_or(0)
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }

    fn substitute(&self, subst: &HashMap<&str, &Term>) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|t| t.substitute(subst)).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_comma_separated(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Self {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Self {
            atom,
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        self.atom.fmt(f)
    }
}

/// `head :- body.` with the body literals in source order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Self { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Self::new(head, Vec::new())
    }

    pub fn pos_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| !l.negated).map(|l| &l.atom)
    }

    pub fn neg_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| l.negated).map(|l| &l.atom)
    }

    pub fn is_definite(&self) -> bool {
        self.body.iter().all(|l| !l.negated)
    }

    /// Variables in first-occurrence order, head first.
    pub fn variables(&self) -> Vec<&str> {
        let mut vars = Vec::new();
        self.head.collect_vars(&mut vars);
        for lit in &self.body {
            lit.atom.collect_vars(&mut vars);
        }
        vars
    }

    /// Body variables that do not occur in the head.
    pub fn local_variables(&self) -> Vec<&str> {
        let mut head_vars = Vec::new();
        self.head.collect_vars(&mut head_vars);
        let mut body_vars = Vec::new();
        for lit in &self.body {
            lit.atom.collect_vars(&mut body_vars);
        }
        body_vars.retain(|v| !head_vars.contains(v));
        body_vars
    }

    fn substitute(&self, subst: &HashMap<&str, &Term>) -> Clause {
        Clause {
            head: self.head.substitute(subst),
            body: self
                .body
                .iter()
                .map(|l| Literal {
                    atom: l.atom.substitute(subst),
                    negated: l.negated,
                })
                .collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.head.fmt(f)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            write_comma_separated(f, &self.body)?;
        }
        f.write_str(".")
    }
}

/// Constants, function symbols and predicate arities of a program, each in
/// first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub constants: Vec<String>,
    pub functors: Vec<(String, usize)>,
    pub predicates: IndexMap<String, usize>,
}

impl SymbolTable {
    fn add_term(&mut self, term: &Term) {
        match term {
            Term::Var(_) => {}
            Term::Const(c) => {
                if !self.constants.contains(c) {
                    self.constants.push(c.clone());
                }
            }
            Term::Compound(name, args) => {
                let key = (name.clone(), args.len());
                if !self.functors.contains(&key) {
                    self.functors.push(key);
                }
                args.iter().for_each(|t| self.add_term(t));
            }
        }
    }

    fn add_atom(&mut self, atom: &Atom) -> Result<()> {
        match self.predicates.get(&atom.predicate) {
            Some(&arity) if arity != atom.arity() => {
                return Err(Error::ArityConflict {
                    predicate: atom.predicate.clone(),
                    first: arity,
                    second: atom.arity(),
                })
            }
            Some(_) => {}
            None => {
                self.predicates.insert(atom.predicate.clone(), atom.arity());
            }
        }
        atom.args.iter().for_each(|t| self.add_term(t));
        Ok(())
    }
}

/// A finite list of clauses together with its symbol table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    clauses: Vec<Clause>,
    symbols: SymbolTable,
}

impl Program {
    /// Builds the symbol table, rejecting predicates used with two arities.
    pub fn new(clauses: Vec<Clause>) -> Result<Self> {
        let mut symbols = SymbolTable::default();
        for clause in &clauses {
            symbols.add_atom(&clause.head)?;
            for lit in &clause.body {
                symbols.add_atom(&lit.atom)?;
            }
        }
        Ok(Self { clauses, symbols })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn is_ground(&self) -> bool {
        self.clauses.iter().all(|c| c.variables().is_empty())
    }

    pub fn is_definite(&self) -> bool {
        self.clauses.iter().all(Clause::is_definite)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for clause in &self.clauses {
            writeln!(f, "{clause}")?;
        }
        Ok(())
    }
}

fn write_comma_separated<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        item.fmt(f)?;
    }
    Ok(())
}
