use std::collections::VecDeque;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;

use crate::error::{Error, Result};
use crate::fixcomp::{quasi_as_ground, QuasiInterpretation};
use crate::operators::{fitting_iteration, Interpretation};
use crate::syntax::{AtomEnumeration, AtomId, GroundProgram};

/// Total map from atoms to natural-number levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelMapping {
    levels: Vec<u32>,
}

impl LevelMapping {
    pub fn new(levels: Vec<u32>) -> Self {
        Self { levels }
    }

    /// Level of an atom is its position in the enumeration.
    pub fn by_enumeration(base_len: usize) -> Self {
        Self::new((0..base_len as u32).collect())
    }

    pub fn level(&self, atom: AtomId) -> u32 {
        self.levels[atom.0]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `atom:level` pairs, lowest level first, ties in enumeration order.
    pub fn render(&self, base: &AtomEnumeration) -> String {
        let mut ids: Vec<AtomId> = base.ids().collect();
        ids.sort_by_key(|&a| (self.level(a), a));
        ids.iter()
            .map(|&a| format!("{}:{}", base.atom(a), self.level(a)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A dependency cycle through at least one negative edge. `atoms` is closed
/// (first equals last); `negated[k]` marks the edge from `atoms[k]` to
/// `atoms[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCycle {
    pub atoms: Vec<AtomId>,
    pub negated: Vec<bool>,
}

impl NegativeCycle {
    pub fn render(&self, base: &AtomEnumeration) -> String {
        let mut out = base.atom(self.atoms[0]).to_string();
        for (k, &neg) in self.negated.iter().enumerate() {
            let arrow = if neg { " ->(neg) " } else { " -> " };
            let _ = write!(out, "{arrow}{}", base.atom(self.atoms[k + 1]));
        }
        out
    }
}

fn dependency_graph(g: &GroundProgram) -> DiGraph<AtomId, bool> {
    let mut graph = DiGraph::with_capacity(g.atom_count(), 0);
    for a in g.base().ids() {
        graph.add_node(a);
    }
    for c in g.clauses() {
        let head = NodeIndex::new(c.head.0);
        for &b in &c.pos {
            graph.add_edge(head, NodeIndex::new(b.0), false);
        }
        for &b in &c.neg {
            graph.add_edge(head, NodeIndex::new(b.0), true);
        }
    }
    graph
}

/// Finds a level mapping with `l(head) ≥ l(positive body atom)` and
/// `l(head) > l(negative body atom)` for every clause.
///
/// Works on the atom dependency graph (head to body atom, marked negative for
/// negated literals): a mapping exists iff no strongly connected component
/// contains a negative edge. Levels are the least ones compatible with the
/// condensation, so atoms depending on nothing get level 0.
pub fn find_local_stratification(
    g: &GroundProgram,
) -> std::result::Result<LevelMapping, NegativeCycle> {
    let graph = dependency_graph(g);
    // tarjan_scc lists components so that every edge leaves a component
    // towards one listed earlier (or itself)
    let components = tarjan_scc(&graph);
    let mut component_of = vec![0usize; graph.node_count()];
    for (k, comp) in components.iter().enumerate() {
        for n in comp {
            component_of[n.index()] = k;
        }
    }

    let mut levels = vec![0u32; graph.node_count()];
    for (k, comp) in components.iter().enumerate() {
        let mut level = 0u32;
        for &node in comp {
            for edge in graph.edges(node) {
                let target = edge.target();
                let negated = *edge.weight();
                if component_of[target.index()] == k {
                    if negated {
                        return Err(negative_cycle(&graph, &component_of, node, target));
                    }
                } else {
                    level = level.max(levels[target.index()] + u32::from(negated));
                }
            }
        }
        for &node in comp {
            levels[node.index()] = level;
        }
    }
    Ok(LevelMapping::new(levels))
}

/// Closes the negative edge `from -> to` into a cycle by a shortest path
/// from `to` back to `from` inside their component.
fn negative_cycle(
    graph: &DiGraph<AtomId, bool>,
    component_of: &[usize],
    from: NodeIndex,
    to: NodeIndex,
) -> NegativeCycle {
    let comp = component_of[from.index()];
    let mut parent: Vec<Option<(NodeIndex, bool)>> = vec![None; graph.node_count()];
    let mut visited = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([to]);
    visited[to.index()] = true;
    while let Some(n) = queue.pop_front() {
        if n == from {
            break;
        }
        for edge in graph.edges(n) {
            let t = edge.target();
            if component_of[t.index()] == comp && !visited[t.index()] {
                visited[t.index()] = true;
                parent[t.index()] = Some((n, *edge.weight()));
                queue.push_back(t);
            }
        }
    }
    // walk back from `from` to `to`
    let mut path = vec![from];
    let mut signs = Vec::new();
    let mut cur = from;
    while cur != to {
        let (prev, neg) = parent[cur.index()].expect("component is strongly connected");
        path.push(prev);
        signs.push(neg);
        cur = prev;
    }
    path.reverse();
    signs.reverse();
    // path runs to ... from; prepend the negative edge from -> to
    let mut atoms = vec![graph[from]];
    atoms.extend(path.iter().map(|&n| graph[n]));
    let mut negated = vec![true];
    negated.extend(signs);
    // start at the atom enumerated first so witnesses are canonical
    atoms.pop();
    let shift = (0..atoms.len()).min_by_key(|&k| atoms[k]).unwrap_or(0);
    atoms.rotate_left(shift);
    negated.rotate_left(shift);
    atoms.push(atoms[0]);
    NegativeCycle { atoms, negated }
}

/// `true` iff every clause has its head strictly above every body atom.
pub fn check_locally_hierarchical(g: &GroundProgram, l: &LevelMapping) -> bool {
    g.clauses().iter().all(|c| {
        let head = l.level(c.head);
        c.pos.iter().chain(&c.neg).all(|&b| l.level(b) < head)
    })
}

/// Level mapping read off the Fitting iteration of a negative-body program
/// with total Fitting model: `l(A)` is the least `α` such that the
/// `(α + 1)`-th iterate already gives `A` its final value. Also returns the
/// true atoms of that model.
pub fn level_from_fitting(q: &QuasiInterpretation) -> Result<(LevelMapping, Interpretation)> {
    let g = quasi_as_ground(q);
    let it = fitting_iteration(&g);
    if let Some(a) = it.model.undefined_atoms().next() {
        return Err(Error::NotTotal {
            atom: g.base().atom(a).to_string(),
        });
    }
    let levels = it
        .stage
        .iter()
        .map(|s| (s.expect("total model decides every atom") - 1) as u32)
        .collect();
    Ok((LevelMapping::new(levels), it.model.true_part()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixcomp::fixpoint_completion;
    use crate::syntax::{ground_program, parse_program, Atom};

    fn ground(text: &str) -> GroundProgram {
        ground_program(&parse_program(text).unwrap(), 0).unwrap()
    }

    const P6: &str = "p :- not q. q :- not r. r.";

    #[test]
    fn stratify_p6() {
        let g = ground(P6);
        let l = find_local_stratification(&g).unwrap();
        assert_eq!(l.render(g.base()), "r:0 q:1 p:2");
    }

    #[test]
    fn self_loop_through_negation() {
        let g = ground("p :- not p.");
        let cycle = find_local_stratification(&g).unwrap_err();
        assert_eq!(cycle.render(g.base()), "p ->(neg) p");
    }

    #[test]
    fn even_loop_through_negation() {
        let g = ground("p :- not q. q :- not p.");
        let cycle = find_local_stratification(&g).unwrap_err();
        assert_eq!(cycle.render(g.base()), "p ->(neg) q ->(neg) p");
    }

    #[test]
    fn witness_cycle_with_positive_edges() {
        let g = ground("a :- b. b :- not c. c :- a.");
        let cycle = find_local_stratification(&g).unwrap_err();
        assert_eq!(cycle.atoms.first(), cycle.atoms.last());
        assert_eq!(cycle.negated.iter().filter(|&&n| n).count(), 1);
        assert_eq!(cycle.atoms.len(), 4);
    }

    #[test]
    fn positive_recursion_shares_a_level() {
        let g = ground("a :- b. b :- a. c :- not a. b :- not d.");
        let l = find_local_stratification(&g).unwrap();
        let lv = |n: &str| l.level(g.base().id(&Atom::prop(n)).unwrap());
        assert_eq!(lv("a"), lv("b"));
        assert!(lv("c") > lv("a"));
        assert!(lv("b") > lv("d"));
    }

    #[test]
    fn hierarchical_checks() {
        let g = ground(P6);
        let l = find_local_stratification(&g).unwrap();
        assert!(check_locally_hierarchical(&g, &l));
        let fix = quasi_as_ground(fixpoint_completion(&g).unwrap().fix());
        assert!(check_locally_hierarchical(&fix, &l));
        let loop_ = ground("p :- p.");
        for lvl in 0..3 {
            assert!(!check_locally_hierarchical(
                &loop_,
                &LevelMapping::new(vec![lvl])
            ));
        }
    }

    #[test]
    fn fitting_levels_p6() {
        let g = ground(P6);
        let fix = fixpoint_completion(&g).unwrap().into_fix();
        let (l, i) = level_from_fitting(&fix).unwrap();
        assert_eq!(l.render(g.base()), "r:0 q:1 p:2");
        assert_eq!(i.render(g.base()), "{p, r}");
    }

    #[test]
    fn fitting_levels_need_total_model() {
        let g = ground("p :- not p.");
        let fix = fixpoint_completion(&g).unwrap().into_fix();
        assert_eq!(
            level_from_fitting(&fix).unwrap_err(),
            Error::NotTotal { atom: "p".into() }
        );
        let g = ground("a.");
        let (l, i) = level_from_fitting(fixpoint_completion(&g).unwrap().fix()).unwrap();
        assert_eq!(l.levels(), &[0]);
        assert_eq!(i.count(), 1);
    }
}
