//! Two-valued models along independent routes, the well-founded model, the
//! property-checking harnesses and the random program corpus.

mod checks;
mod corpus;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fixcomp::{clark_completion, completion_models, fixpoint_completion, quasi_as_ground};
use crate::operators::{gl_operator, tp_step, Interpretation, ThreeValuedInterpretation};
use crate::syntax::{AtomEnumeration, GroundProgram};

pub use checks::{
    check_continuity, check_definite_facts, check_dislocated_contraction, check_gl_limits,
    check_gl_matches_fix, check_gl_matches_fix_against, check_routes, check_stratified_contraction,
    check_total_wf, check_wf_fitting, route_mutation_detected, run_check, Check, CheckOptions,
    CheckReport, Outcome,
};
pub use corpus::{generate_corpus, CorpusSpec};

/// Largest base enumerated exhaustively by default (2^20 interpretations).
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Fixed points of the Gelfond-Lifschitz operator by enumeration.
    BruteForce,
    /// Supported models of the fixpoint completion.
    Fixcomp,
    /// Models of the Clark completion of the fixpoint completion.
    Completion,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::BruteForce, Route::Fixcomp, Route::Completion];

    pub fn name(self) -> &'static str {
        match self {
            Route::BruteForce => "brute",
            Route::Fixcomp => "fixcomp",
            Route::Completion => "completion",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown route `{s}`")))
    }
}

/// A set of two-valued models tagged with the route that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    pub route: Route,
    pub models: BTreeSet<Interpretation>,
}

impl ModelSet {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, i: &Interpretation) -> bool {
        self.models.contains(i)
    }

    pub fn same_models(&self, other: &ModelSet) -> bool {
        self.models == other.models
    }

    /// Each model as a sorted atom list, the lists themselves sorted
    /// lexicographically by atom text.
    pub fn render_lines(&self, base: &AtomEnumeration) -> Vec<String> {
        let mut keyed: Vec<(Vec<String>, String)> = self
            .models
            .iter()
            .map(|m| {
                let mut names: Vec<String> = m.atoms().map(|a| base.atom(a).to_string()).collect();
                names.sort();
                (names, m.render(base))
            })
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, line)| line).collect()
    }
}

fn check_cap(g: &GroundProgram, max_atoms: usize) -> Result<()> {
    if g.atom_count() > max_atoms {
        return Err(Error::CapExceeded {
            atoms: g.atom_count(),
            cap: max_atoms,
        });
    }
    Ok(())
}

/// Fixed points of the immediate consequence operator.
pub fn supported_models(g: &GroundProgram, max_atoms: usize) -> Result<BTreeSet<Interpretation>> {
    check_cap(g, max_atoms)?;
    Ok(Interpretation::enumerate(g.atom_count())
        .filter(|i| tp_step(g, i) == *i)
        .collect())
}

pub fn stable_models_bruteforce(g: &GroundProgram, max_atoms: usize) -> Result<ModelSet> {
    check_cap(g, max_atoms)?;
    Ok(ModelSet {
        route: Route::BruteForce,
        models: Interpretation::enumerate(g.atom_count())
            .filter(|i| gl_operator(g, i) == *i)
            .collect(),
    })
}

pub fn stable_models_via_fixcomp(g: &GroundProgram, max_atoms: usize) -> Result<ModelSet> {
    check_cap(g, max_atoms)?;
    let fix = fixpoint_completion(g)?;
    Ok(ModelSet {
        route: Route::Fixcomp,
        models: supported_models(&quasi_as_ground(fix.fix()), max_atoms)?,
    })
}

pub fn stable_models_via_completion(g: &GroundProgram, max_atoms: usize) -> Result<ModelSet> {
    check_cap(g, max_atoms)?;
    let fix = fixpoint_completion(g)?;
    Ok(ModelSet {
        route: Route::Completion,
        models: completion_models(&clark_completion(fix.fix()), max_atoms)?,
    })
}

pub fn stable_models(g: &GroundProgram, route: Route, max_atoms: usize) -> Result<ModelSet> {
    match route {
        Route::BruteForce => stable_models_bruteforce(g, max_atoms),
        Route::Fixcomp => stable_models_via_fixcomp(g, max_atoms),
        Route::Completion => stable_models_via_completion(g, max_atoms),
    }
}

/// One pair `(K_n, U_n)` of the alternating fixpoint: under- and
/// over-estimates of the true atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingStep {
    pub lower: Interpretation,
    pub upper: Interpretation,
}

/// `K_0 = ∅`, `U_0 = base`, `K_{n+1} = GL(U_n)`, `U_{n+1} = GL(K_n)` up to the
/// first repeated pair. The last entry is the limit.
pub fn alternating_fixpoint(g: &GroundProgram) -> Vec<AlternatingStep> {
    let n = g.atom_count();
    let mut trace = vec![AlternatingStep {
        lower: Interpretation::empty(n),
        upper: Interpretation::full(n),
    }];
    loop {
        let last = trace.last().expect("trace is never empty");
        let next = AlternatingStep {
            lower: gl_operator(g, &last.upper),
            upper: gl_operator(g, &last.lower),
        };
        if &next == last {
            return trace;
        }
        trace.push(next);
    }
}

/// The well-founded model: atoms in the limit of the lower sequence are true,
/// atoms outside the limit of the upper sequence are false.
pub fn well_founded_model(g: &GroundProgram) -> ThreeValuedInterpretation {
    let limit = alternating_fixpoint(g).pop().expect("trace is never empty");
    ThreeValuedInterpretation::new(limit.lower, limit.upper.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixcomp::fixpoint_completion;
    use crate::operators::fitting_model;
    use crate::operators::tests::arb_program;
    use crate::syntax::{ground_program, parse_program};
    use proptest::prelude::*;

    fn ground(text: &str) -> GroundProgram {
        ground_program(&parse_program(text).unwrap(), 0).unwrap()
    }

    fn lines(g: &GroundProgram, models: &BTreeSet<Interpretation>) -> Vec<String> {
        ModelSet {
            route: Route::BruteForce,
            models: models.clone(),
        }
        .render_lines(g.base())
    }

    const P1: &str = "p :- q, not r. q.";
    const P2: &str = "p :- not q. q :- not p.";
    const P3: &str = "p :- not p.";
    const P4: &str = "p :- p.";
    const P5: &str = "win(X) :- move(X,Y), not win(Y). move(a,b). move(b,a). move(b,c).";
    const P6: &str = "p :- not q. q :- not r. r.";

    #[test]
    fn supported_models_examples() {
        let g = ground(P2);
        assert_eq!(
            lines(&g, &supported_models(&g, 20).unwrap()),
            ["{p}", "{q}"]
        );
        let g = ground(P4);
        assert_eq!(lines(&g, &supported_models(&g, 20).unwrap()), ["{}", "{p}"]);
        let g = ground("a :- a.").with_clauses([]);
        assert_eq!(lines(&g, &supported_models(&g, 20).unwrap()), ["{}"]);
    }

    #[test]
    fn stable_models_examples() {
        for route in Route::ALL {
            let g = ground(P2);
            let m = stable_models(&g, route, 20).unwrap();
            assert_eq!(m.render_lines(g.base()), ["{p}", "{q}"], "{route}");
            let g = ground(P3);
            assert!(stable_models(&g, route, 20).unwrap().is_empty());
            let g = ground(P4);
            assert_eq!(
                stable_models(&g, route, 20).unwrap().render_lines(g.base()),
                ["{}"]
            );
            let g = ground(P1);
            assert_eq!(
                stable_models(&g, route, 20).unwrap().render_lines(g.base()),
                ["{p, q}"]
            );
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = ground(P6);
        assert_eq!(
            stable_models_bruteforce(&g, 2).unwrap_err(),
            Error::CapExceeded { atoms: 3, cap: 2 }
        );
        assert!(supported_models(&g, 2).is_err());
    }

    #[test]
    fn route_names_parse() {
        for r in Route::ALL {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert!("solver".parse::<Route>().is_err());
    }

    #[test]
    fn well_founded_examples() {
        let g = ground(P3);
        let wf = well_founded_model(&g);
        assert_eq!(wf, ThreeValuedInterpretation::undefined(1));
        assert_eq!(alternating_fixpoint(&g).len(), 1);

        let g = ground(P5);
        let wf = well_founded_model(&g);
        assert!(wf.is_total());
        assert_eq!(
            wf.true_part().render(g.base()),
            "{move(a, b), move(b, a), move(b, c), win(b)}"
        );

        let g = ground(P6);
        assert_eq!(
            well_founded_model(&g).render(g.base()),
            "true {p, r} false {q} undefined {}"
        );
    }

    proptest! {
        #[test]
        fn alternating_sequences_nest(g in arb_program(8)) {
            let trace = alternating_fixpoint(&g);
            for w in trace.windows(2) {
                prop_assert!(w[0].lower.is_subset(&w[1].lower));
                prop_assert!(w[1].lower.is_subset(&w[1].upper));
                prop_assert!(w[1].upper.is_subset(&w[0].upper));
            }
        }

        #[test]
        fn well_founded_is_fitting_of_fix(g in arb_program(8)) {
            let fix = fixpoint_completion(&g).unwrap();
            prop_assert_eq!(well_founded_model(&g), fitting_model(&quasi_as_ground(fix.fix())));
        }

        #[test]
        fn routes_agree(g in arb_program(7)) {
            let brute = stable_models_bruteforce(&g, 20).unwrap();
            for route in [Route::Fixcomp, Route::Completion] {
                prop_assert!(stable_models(&g, route, 20).unwrap().same_models(&brute));
            }
            let supported = supported_models(&g, 20).unwrap();
            prop_assert!(brute.models.is_subset(&supported));
        }

        #[test]
        fn stable_models_respect_well_founded_model(g in arb_program(7)) {
            let wf = well_founded_model(&g);
            for m in stable_models_bruteforce(&g, 20).unwrap().models {
                prop_assert!(wf.true_part().is_subset(&m));
                prop_assert!(m.is_subset(&wf.false_part().complement()));
            }
        }
    }
}
