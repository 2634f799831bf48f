use std::collections::HashMap;

use crate::operators::{gl_operator, Interpretation};
use crate::syntax::GroundProgram;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOutcome {
    /// The last state is a fixed point.
    FixedPoint,
    /// The next state would repeat an earlier one; `length` states form the
    /// cycle.
    Cycle {
        length: usize,
    },
    CapReached,
}

/// The sequence `i0, GL(i0), GL(GL(i0)), ...` up to the first repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub states: Vec<Interpretation>,
    pub outcome: IterationOutcome,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The limit when the iteration converged.
    pub fn limit(&self) -> Option<&Interpretation> {
        match self.outcome {
            IterationOutcome::FixedPoint => self.states.last(),
            _ => None,
        }
    }
}

/// Iterates the Gelfond-Lifschitz operator from `i0` for at most `cap`
/// applications. Over a finite base, convergence in the Cantor topology is
/// reaching a fixed point.
pub fn iterate_gl(g: &GroundProgram, i0: &Interpretation, cap: usize) -> IterationTrace {
    let mut states = vec![i0.clone()];
    let mut seen = HashMap::from([(i0.clone(), 0usize)]);
    for _ in 0..cap {
        let last = states.last().expect("trace is never empty");
        let next = gl_operator(g, last);
        if &next == last {
            return IterationTrace {
                states,
                outcome: IterationOutcome::FixedPoint,
            };
        }
        if let Some(&k) = seen.get(&next) {
            let length = states.len() - k;
            return IterationTrace {
                states,
                outcome: IterationOutcome::Cycle { length },
            };
        }
        seen.insert(next.clone(), states.len());
        states.push(next);
    }
    IterationTrace {
        states,
        outcome: IterationOutcome::CapReached,
    }
}
