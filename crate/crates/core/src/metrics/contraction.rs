use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operators::{gl_operator, Interpretation};
use crate::syntax::GroundProgram;

use super::distance::{dl_distance, rho_distance, LevelDistance};
use super::levels::LevelMapping;

/// Largest base for which every pair of interpretations is checked.
pub const DEFAULT_PAIR_CAP: usize = 12;

/// Keep at most this many violations in a report.
const KEPT_VIOLATIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Metric {
    /// `d_l`; pairs of distinct interpretations are checked.
    Ultrametric,
    /// `ρ` anchored at `anchor`; every pair with `ρ > 0` is checked,
    /// including `(J, J)`.
    Dislocated { anchor: Interpretation },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    Exhaustive { max_atoms: usize },
    Sample { pairs: usize, seed: u64 },
}

impl Default for PairMode {
    fn default() -> Self {
        PairMode::Exhaustive {
            max_atoms: DEFAULT_PAIR_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionViolation {
    pub i: Interpretation,
    pub j: Interpretation,
    pub before: LevelDistance,
    pub after: LevelDistance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    pub pairs_checked: u64,
    pub violation_count: u64,
    /// The first few violations in checking order.
    pub violations: Vec<ContractionViolation>,
}

impl ContractionReport {
    pub fn is_contracting(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks `d(GL(I), GL(J)) < d(I, J)` over pairs of interpretations.
pub fn contraction_report(
    g: &GroundProgram,
    l: &LevelMapping,
    metric: &Metric,
    mode: PairMode,
) -> Result<ContractionReport> {
    let n = g.atom_count();
    let distance = |a: &Interpretation, b: &Interpretation| match metric {
        Metric::Ultrametric => dl_distance(a, b, l),
        Metric::Dislocated { anchor } => rho_distance(a, b, anchor, l),
    };
    let with_diagonal = matches!(metric, Metric::Dislocated { .. });
    let mut report = ContractionReport {
        pairs_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    let mut check =
        |i: &Interpretation, gi: &Interpretation, j: &Interpretation, gj: &Interpretation| {
            let before = distance(i, j);
            if before.is_zero() {
                return;
            }
            report.pairs_checked += 1;
            let after = distance(gi, gj);
            if after >= before {
                report.violation_count += 1;
                if report.violations.len() < KEPT_VIOLATIONS {
                    report.violations.push(ContractionViolation {
                        i: i.clone(),
                        j: j.clone(),
                        before,
                        after,
                    });
                }
            }
        };

    match mode {
        PairMode::Exhaustive { max_atoms } => {
            if n > max_atoms {
                return Err(Error::CapExceeded {
                    atoms: n,
                    cap: max_atoms,
                });
            }
            let states: Vec<Interpretation> = Interpretation::enumerate(n).collect();
            let images: Vec<Interpretation> = states.iter().map(|i| gl_operator(g, i)).collect();
            for a in 0..states.len() {
                let start = if with_diagonal { a } else { a + 1 };
                for b in start..states.len() {
                    check(&states[a], &images[a], &states[b], &images[b]);
                }
            }
        }
        PairMode::Sample { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random = |rng: &mut ChaCha8Rng| {
                Interpretation::from_atoms(n, g.base().ids().filter(|_| rng.random_bool(0.5)))
            };
            for _ in 0..pairs {
                let i = random(&mut rng);
                let j = if with_diagonal && rng.random_bool(0.1) {
                    i.clone()
                } else {
                    random(&mut rng)
                };
                let (gi, gj) = (gl_operator(g, &i), gl_operator(g, &j));
                check(&i, &gi, &j, &gj);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixcomp::fixpoint_completion;
    use crate::metrics::{find_local_stratification, level_from_fitting};
    use crate::syntax::{ground_program, parse_program};

    fn ground(text: &str) -> GroundProgram {
        ground_program(&parse_program(text).unwrap(), 0).unwrap()
    }

    #[test]
    fn stratified_program_contracts() {
        let g = ground("p :- not q. q :- not r. r.");
        let l = find_local_stratification(&g).unwrap();
        let report = contraction_report(&g, &l, &Metric::Ultrametric, PairMode::default()).unwrap();
        assert_eq!(report.pairs_checked, 28);
        assert!(report.is_contracting());
    }

    #[test]
    fn win_move_contracts_under_rho() {
        let g = ground("win(X) :- move(X,Y), not win(Y). move(a,b). move(b,a). move(b,c).");
        let (l, anchor) = level_from_fitting(fixpoint_completion(&g).unwrap().fix()).unwrap();
        let report =
            contraction_report(&g, &l, &Metric::Dislocated { anchor }, PairMode::default())
                .unwrap();
        assert!(report.pairs_checked > 0);
        assert!(report.is_contracting(), "{report:?}");
    }

    #[test]
    fn two_stable_models_never_contract() {
        let g = ground("p :- not q. q :- not p.");
        for levels in [vec![0, 0], vec![0, 1], vec![3, 1]] {
            let l = LevelMapping::new(levels);
            let report =
                contraction_report(&g, &l, &Metric::Ultrametric, PairMode::default()).unwrap();
            assert!(report.violation_count >= 1);
            let v = &report.violations[0];
            assert_eq!(v.before, dl_distance(&v.i, &v.j, &l));
        }
    }

    #[test]
    fn exhaustive_cap() {
        let g = ground("a. b. c.");
        let l = LevelMapping::by_enumeration(3);
        let err = contraction_report(
            &g,
            &l,
            &Metric::Ultrametric,
            PairMode::Exhaustive { max_atoms: 2 },
        )
        .unwrap_err();
        assert_eq!(err, Error::CapExceeded { atoms: 3, cap: 2 });
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = ground("p :- not q. q :- not r. r. s :- p.");
        let l = find_local_stratification(&g).unwrap();
        let mode = PairMode::Sample {
            pairs: 200,
            seed: 9,
        };
        let a = contraction_report(&g, &l, &Metric::Ultrametric, mode).unwrap();
        let b = contraction_report(&g, &l, &Metric::Ultrametric, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.is_contracting());
        assert!(a.pairs_checked > 100);
    }
}
