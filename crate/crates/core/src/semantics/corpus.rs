use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::syntax::{ground_program, Atom, Clause, GroundProgram, Literal, Program};

/// Parameters of a seeded corpus of random propositional programs.
///
/// `n_atoms` and `n_clauses` are upper bounds: each program draws its atom
/// count from `1..=n_atoms` and its clause count from `1..=n_clauses`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub n_atoms: usize,
    pub n_clauses: usize,
    pub max_body: usize,
    pub neg_prob: f64,
    /// Respect a random level assignment so every program is locally
    /// stratified.
    pub stratified_only: bool,
}

impl CorpusSpec {
    pub fn new(
        seed: u64,
        count: usize,
        n_atoms: usize,
        n_clauses: usize,
        max_body: usize,
        neg_prob: f64,
    ) -> Self {
        Self {
            seed,
            count,
            n_atoms,
            n_clauses,
            max_body,
            neg_prob,
            stratified_only: false,
        }
    }

    pub fn stratified(mut self) -> Self {
        self.stratified_only = true;
        self
    }

    /// Reads `n_atoms,n_clauses,max_body,neg_prob[,stratified]`.
    pub fn parse(text: &str, seed: u64, count: usize) -> Result<Self> {
        let bad = |what: &str| Error::Precondition(format!("corpus spec `{text}`: {what}"));
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(bad(
                "expected n_atoms,n_clauses,max_body,neg_prob[,stratified]",
            ));
        }
        let natural = |s: &str, what: &str| s.parse::<usize>().map_err(|_| bad(what));
        let n_atoms = natural(parts[0], "n_atoms is not a natural number")?;
        let n_clauses = natural(parts[1], "n_clauses is not a natural number")?;
        let max_body = natural(parts[2], "max_body is not a natural number")?;
        let neg_prob: f64 = parts[3]
            .parse()
            .map_err(|_| bad("neg_prob is not a number"))?;
        let stratified_only = match parts.get(4) {
            None => false,
            Some(&"stratified") => true,
            Some(_) => return Err(bad("the fifth field must be `stratified`")),
        };
        let spec = Self {
            stratified_only,
            ..Self::new(seed, count, n_atoms, n_clauses, max_body, neg_prob)
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 || self.n_clauses == 0 {
            return Err(Error::Precondition(
                "corpus programs need at least one atom and one clause".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.neg_prob) {
            return Err(Error::Precondition(format!(
                "neg_prob {} is outside [0, 1]",
                self.neg_prob
            )));
        }
        Ok(())
    }
}

fn random_program(spec: &CorpusSpec, rng: &mut ChaCha8Rng) -> Program {
    let n = rng.random_range(1..=spec.n_atoms);
    let m = rng.random_range(1..=spec.n_clauses);
    let levels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let atom = |k: usize| Atom::prop(format!("a{k}"));
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let head = rng.random_range(0..n);
        let size = rng.random_range(0..=spec.max_body);
        let mut body = Vec::with_capacity(size);
        for _ in 0..size {
            let mut negated = rng.random_bool(spec.neg_prob);
            let target = if spec.stratified_only {
                let below: Vec<usize> = (0..n).filter(|&k| levels[k] < levels[head]).collect();
                if below.is_empty() {
                    negated = false;
                }
                if negated {
                    *below.choose(rng).expect("non-empty")
                } else {
                    let up_to: Vec<usize> = (0..n).filter(|&k| levels[k] <= levels[head]).collect();
                    *up_to.choose(rng).expect("contains the head")
                }
            } else {
                rng.random_range(0..n)
            };
            body.push(Literal {
                atom: atom(target),
                negated,
            });
        }
        clauses.push(Clause::new(atom(head), body));
    }
    Program::new(clauses).expect("propositional atoms have arity zero")
}

/// Deterministic in the spec. Programs are built at the source level and
/// grounded, so printing a member and parsing it back yields the same ground
/// program.
pub fn generate_corpus(spec: &CorpusSpec) -> Vec<GroundProgram> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count)
        .map(|_| {
            let p = random_program(spec, &mut rng);
            ground_program(&p, 0).expect("propositional programs ground to themselves")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::find_local_stratification;
    use crate::syntax::parse_program;

    #[test]
    fn deterministic_in_seed() {
        let spec = CorpusSpec::new(1, 30, 10, 15, 3, 0.5);
        let a: Vec<String> = generate_corpus(&spec)
            .iter()
            .map(|g| g.to_string())
            .collect();
        let b: Vec<String> = generate_corpus(&spec)
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(a, b);
        let c: Vec<String> = generate_corpus(&CorpusSpec { seed: 2, ..spec })
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_ne!(a, c);
    }

    #[test]
    fn respects_bounds() {
        let spec = CorpusSpec::new(4, 200, 6, 9, 2, 0.5);
        for g in generate_corpus(&spec) {
            assert!(g.atom_count() <= 6 && g.atom_count() >= 1);
            assert!(!g.is_empty() && g.len() <= 9);
            assert!(g.clauses().iter().all(|c| c.pos.len() + c.neg.len() <= 2));
        }
    }

    #[test]
    fn zero_negation_gives_definite_programs() {
        let spec = CorpusSpec::new(3, 100, 8, 12, 3, 0.0);
        assert!(generate_corpus(&spec)
            .iter()
            .all(GroundProgram::is_definite));
    }

    #[test]
    fn stratified_corpus_is_stratified() {
        let spec = CorpusSpec::new(5, 300, 8, 12, 3, 0.7).stratified();
        let corpus = generate_corpus(&spec);
        assert!(corpus.iter().all(|g| find_local_stratification(g).is_ok()));
        assert!(corpus.iter().any(|g| !g.is_definite()));
    }

    #[test]
    fn printed_members_reparse() {
        let spec = CorpusSpec::new(8, 50, 10, 15, 3, 0.5);
        for g in generate_corpus(&spec) {
            let again = ground_program(&parse_program(&g.to_string()).unwrap(), 0).unwrap();
            assert_eq!(again.to_string(), g.to_string());
            assert_eq!(again.atom_count(), g.atom_count());
        }
    }

    #[test]
    fn parse_spec_strings() {
        let s = CorpusSpec::parse("10,15,3,0.5", 1, 500).unwrap();
        assert_eq!(s, CorpusSpec::new(1, 500, 10, 15, 3, 0.5));
        assert!(
            CorpusSpec::parse("8,10,2,0.3,stratified", 1, 5)
                .unwrap()
                .stratified_only
        );
        assert!(CorpusSpec::parse("8,10,2", 1, 5).is_err());
        assert!(CorpusSpec::parse("8,10,2,1.5", 1, 5).is_err());
        assert!(CorpusSpec::parse("0,10,2,0.5", 1, 5).is_err());
        assert!(CorpusSpec::parse("8,10,2,0.5,layered", 1, 5).is_err());
    }
}
