//! Semantic operators on ground programs: the immediate consequence operator,
//! least models of definite programs, the Gelfond-Lifschitz transform and
//! operator, and the three-valued Fitting operator.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::syntax::{AtomEnumeration, AtomId, GroundClause, GroundProgram};

/// A two-valued Herbrand interpretation: the set of true atoms of a base.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interpretation {
    bits: FixedBitSet,
}

impl Interpretation {
    pub fn empty(base_len: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(base_len),
        }
    }

    pub fn full(base_len: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(base_len);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_atoms(base_len: usize, atoms: impl IntoIterator<Item = AtomId>) -> Self {
        let mut i = Self::empty(base_len);
        for a in atoms {
            i.insert(a);
        }
        i
    }

    /// Bit `k` of `mask` decides atom `k`. Only meaningful for bases of at most
    /// 64 atoms.
    pub fn from_mask(base_len: usize, mask: u64) -> Self {
        debug_assert!(base_len <= 64);
        Self::from_atoms(
            base_len,
            (0..base_len).filter(|k| mask >> k & 1 == 1).map(AtomId),
        )
    }

    /// All `2^base_len` interpretations, in mask order.
    pub fn enumerate(base_len: usize) -> impl Iterator<Item = Interpretation> {
        assert!(base_len < 64, "cannot enumerate a base of {base_len} atoms");
        (0..1u64 << base_len).map(move |m| Self::from_mask(base_len, m))
    }

    pub fn base_len(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.bits.contains(atom.0)
    }

    pub fn insert(&mut self, atom: AtomId) -> bool {
        !self.bits.put(atom.0)
    }

    pub fn remove(&mut self, atom: AtomId) {
        self.bits.set(atom.0, false);
    }

    pub fn toggle(&mut self, atom: AtomId) {
        self.bits.toggle(atom.0);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.bits.ones().map(AtomId)
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Self { bits }
    }

    /// Atoms on which the two interpretations disagree.
    pub fn symmetric_difference<'a>(
        &'a self,
        other: &'a Interpretation,
    ) -> impl Iterator<Item = AtomId> + 'a {
        self.bits.symmetric_difference(&other.bits).map(AtomId)
    }

    /// Complement relative to the base.
    pub fn complement(&self) -> Interpretation {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Self { bits }
    }

    pub fn render(&self, base: &AtomEnumeration) -> String {
        base.render_set(self.atoms())
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base_len()
            .cmp(&other.base_len())
            .then_with(|| self.bits.ones().cmp(other.bits.ones()))
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Undefined,
}

/// A three-valued interpretation: disjoint sets of true and false atoms,
/// everything else undefined.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThreeValuedInterpretation {
    truth: FixedBitSet,
    falsity: FixedBitSet,
}

impl ThreeValuedInterpretation {
    pub fn undefined(base_len: usize) -> Self {
        Self {
            truth: FixedBitSet::with_capacity(base_len),
            falsity: FixedBitSet::with_capacity(base_len),
        }
    }

    /// # Panics
    ///
    /// If the two sets overlap or have different base sizes.
    pub fn new(truth: Interpretation, falsity: Interpretation) -> Self {
        assert_eq!(truth.base_len(), falsity.base_len());
        assert!(
            truth.bits.is_disjoint(&falsity.bits),
            "true and false atoms overlap"
        );
        Self {
            truth: truth.bits,
            falsity: falsity.bits,
        }
    }

    /// The total interpretation making exactly `truth` true.
    pub fn total(truth: &Interpretation) -> Self {
        Self::new(truth.clone(), truth.complement())
    }

    pub fn base_len(&self) -> usize {
        self.truth.len()
    }

    pub fn value(&self, atom: AtomId) -> TruthValue {
        if self.truth.contains(atom.0) {
            TruthValue::True
        } else if self.falsity.contains(atom.0) {
            TruthValue::False
        } else {
            TruthValue::Undefined
        }
    }

    pub fn is_true(&self, atom: AtomId) -> bool {
        self.truth.contains(atom.0)
    }

    pub fn is_false(&self, atom: AtomId) -> bool {
        self.falsity.contains(atom.0)
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.truth.ones().map(AtomId)
    }

    pub fn false_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.falsity.ones().map(AtomId)
    }

    pub fn undefined_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.base_len())
            .filter(|&k| !self.truth.contains(k) && !self.falsity.contains(k))
            .map(AtomId)
    }

    pub fn is_total(&self) -> bool {
        self.undefined_atoms().next().is_none()
    }

    /// Knowledge order: both the true and the false part are included.
    pub fn knowledge_leq(&self, other: &Self) -> bool {
        self.truth.is_subset(&other.truth) && self.falsity.is_subset(&other.falsity)
    }

    pub fn true_part(&self) -> Interpretation {
        Interpretation {
            bits: self.truth.clone(),
        }
    }

    pub fn false_part(&self) -> Interpretation {
        Interpretation {
            bits: self.falsity.clone(),
        }
    }

    pub fn render(&self, base: &AtomEnumeration) -> String {
        format!(
            "true {} false {} undefined {}",
            base.render_set(self.true_atoms()),
            base.render_set(self.false_atoms()),
            base.render_set(self.undefined_atoms())
        )
    }

    fn set_true(&mut self, atom: AtomId) {
        self.truth.insert(atom.0);
    }

    fn set_false(&mut self, atom: AtomId) {
        self.falsity.insert(atom.0);
    }
}

impl fmt::Debug for ThreeValuedInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThreeValued")
            .field("true", &self.truth.ones().collect::<Vec<_>>())
            .field("false", &self.falsity.ones().collect::<Vec<_>>())
            .finish()
    }
}

/// A ground program without negative body literals.
#[derive(Debug, Clone)]
pub struct DefiniteProgram(GroundProgram);

impl DefiniteProgram {
    /// `None` if some clause has a negative body literal.
    pub fn new(program: GroundProgram) -> Option<Self> {
        program.is_definite().then_some(Self(program))
    }

    pub fn program(&self) -> &GroundProgram {
        &self.0
    }

    pub fn into_program(self) -> GroundProgram {
        self.0
    }
}

fn body_true(clause: &GroundClause, i: &Interpretation) -> bool {
    clause.pos.iter().all(|&a| i.contains(a)) && clause.neg.iter().all(|&b| !i.contains(b))
}

/// One application of the immediate consequence operator.
pub fn tp_step(g: &GroundProgram, i: &Interpretation) -> Interpretation {
    debug_assert_eq!(i.base_len(), g.atom_count());
    let mut out = Interpretation::empty(g.atom_count());
    for c in g.clauses() {
        if body_true(c, i) {
            out.insert(c.head);
        }
    }
    out
}

/// `true` iff every clause whose body holds in `i` has its head in `i`.
pub fn is_model(g: &GroundProgram, i: &Interpretation) -> bool {
    g.clauses()
        .iter()
        .all(|c| !body_true(c, i) || i.contains(c.head))
}

/// Least model of the definite part of `g` restricted to the clauses selected
/// by `active`, ignoring negative bodies. Worklist propagation with one
/// pending-atom counter per clause.
fn least_model_where(g: &GroundProgram, active: impl Fn(&GroundClause) -> bool) -> Interpretation {
    let clauses = g.clauses();
    let enabled: Vec<bool> = clauses.iter().map(&active).collect();
    let mut pending: Vec<usize> = clauses.iter().map(|c| c.pos.len()).collect();
    let mut model = Interpretation::empty(g.atom_count());
    let mut queue = Vec::new();
    for (k, c) in clauses.iter().enumerate() {
        if enabled[k] && pending[k] == 0 && model.insert(c.head) {
            queue.push(c.head);
        }
    }
    while let Some(atom) = queue.pop() {
        for &k in g.pos_occurrences(atom) {
            if !enabled[k] {
                continue;
            }
            pending[k] -= 1;
            if pending[k] == 0 && model.insert(clauses[k].head) {
                queue.push(clauses[k].head);
            }
        }
    }
    model
}

/// Least Herbrand model, the limit of the immediate consequence iterates
/// from the empty interpretation.
pub fn least_model(d: &DefiniteProgram) -> Interpretation {
    least_model_where(d.program(), |_| true)
}

/// The reduct `P/I`: clauses with a negated atom true in `i` are deleted, the
/// negative literals of the rest are stripped.
pub fn gl_transform(g: &GroundProgram, i: &Interpretation) -> DefiniteProgram {
    let reduct = g
        .clauses()
        .iter()
        .filter(|c| c.neg.iter().all(|&b| !i.contains(b)))
        .map(|c| GroundClause::new(c.head, c.pos.iter().copied(), []));
    DefiniteProgram(g.with_clauses(reduct))
}

/// `I ↦ least_model(P/I)`, computed without materialising the reduct.
pub fn gl_operator(g: &GroundProgram, i: &Interpretation) -> Interpretation {
    debug_assert_eq!(i.base_len(), g.atom_count());
    least_model_where(g, |c| c.neg.iter().all(|&b| !i.contains(b)))
}

fn literal_true(i3: &ThreeValuedInterpretation, atom: AtomId, negated: bool) -> bool {
    if negated {
        i3.is_false(atom)
    } else {
        i3.is_true(atom)
    }
}

fn literal_false(i3: &ThreeValuedInterpretation, atom: AtomId, negated: bool) -> bool {
    if negated {
        i3.is_true(atom)
    } else {
        i3.is_false(atom)
    }
}

fn literals(c: &GroundClause) -> impl Iterator<Item = (AtomId, bool)> + '_ {
    c.pos
        .iter()
        .map(|&a| (a, false))
        .chain(c.neg.iter().map(|&b| (b, true)))
}

/// One application of the Fitting operator.
///
/// An atom becomes true if some clause for it has an entirely true body, and
/// false if every clause for it has a false body literal (vacuously so when
/// it heads no clause).
pub fn fitting_step(
    g: &GroundProgram,
    i3: &ThreeValuedInterpretation,
) -> ThreeValuedInterpretation {
    debug_assert_eq!(i3.base_len(), g.atom_count());
    let mut out = ThreeValuedInterpretation::undefined(g.atom_count());
    for atom in g.base().ids() {
        let mut all_blocked = true;
        for &k in g.clauses_with_head(atom) {
            let c = g.clause(k);
            if literals(c).all(|(a, n)| literal_true(i3, a, n)) {
                out.set_true(atom);
            }
            if !literals(c).any(|(a, n)| literal_false(i3, a, n)) {
                all_blocked = false;
            }
        }
        if all_blocked {
            out.set_false(atom);
        }
    }
    out
}

/// Least fixed point of the Fitting operator together with the iterate at
/// which each atom was first decided.
#[derive(Debug, Clone)]
pub struct FittingIteration {
    pub model: ThreeValuedInterpretation,
    /// `stage[a] = Some(n)` when atom `a` is first decided in the `n`-th
    /// iterate (`n ≥ 1`), `None` when it stays undefined.
    pub stage: Vec<Option<usize>>,
    /// Number of iterates that decided at least one atom.
    pub stages: usize,
}

/// Runs the Fitting iteration from the everywhere-undefined interpretation.
///
/// Propagation is stage-by-stage: the atoms decided in iterate `n + 1` are
/// exactly those whose condition is met by decisions of iterates `≤ n`, so
/// the recorded stages coincide with the ordinary iterates.
pub fn fitting_iteration(g: &GroundProgram) -> FittingIteration {
    let n = g.atom_count();
    let clauses = g.clauses();
    // literals not yet true, and whether some literal is already false
    let mut open: Vec<usize> = clauses.iter().map(|c| c.pos.len() + c.neg.len()).collect();
    let mut blocked = vec![false; clauses.len()];
    let mut live: Vec<usize> = g
        .base()
        .ids()
        .map(|a| g.clauses_with_head(a).len())
        .collect();

    let mut model = ThreeValuedInterpretation::undefined(n);
    let mut stage = vec![None; n];

    let mut to_true: Vec<AtomId> = clauses
        .iter()
        .filter(|c| c.pos.is_empty() && c.neg.is_empty())
        .map(|c| c.head)
        .collect();
    let mut to_false: Vec<AtomId> = g.base().ids().filter(|a| live[a.0] == 0).collect();

    let mut current = 0;
    loop {
        to_true.retain(|a| model.value(*a) == TruthValue::Undefined);
        to_true.sort_unstable();
        to_true.dedup();
        to_false.retain(|a| model.value(*a) == TruthValue::Undefined);
        to_false.sort_unstable();
        to_false.dedup();
        if to_true.is_empty() && to_false.is_empty() {
            break;
        }
        current += 1;
        for &a in &to_true {
            model.set_true(a);
            stage[a.0] = Some(current);
        }
        for &a in &to_false {
            model.set_false(a);
            stage[a.0] = Some(current);
        }

        let mut next_true = Vec::new();
        let mut next_false = Vec::new();
        let mut satisfy = |k: usize, blocked: &[bool], next_true: &mut Vec<AtomId>| {
            open[k] -= 1;
            if open[k] == 0 && !blocked[k] {
                next_true.push(clauses[k].head);
            }
        };
        let mut newly_blocked = Vec::new();
        for &a in &to_true {
            g.pos_occurrences(a)
                .iter()
                .for_each(|&k| satisfy(k, &blocked, &mut next_true));
            newly_blocked.extend_from_slice(g.neg_occurrences(a));
        }
        for &a in &to_false {
            g.neg_occurrences(a)
                .iter()
                .for_each(|&k| satisfy(k, &blocked, &mut next_true));
            newly_blocked.extend_from_slice(g.pos_occurrences(a));
        }
        for k in newly_blocked {
            if !blocked[k] {
                blocked[k] = true;
                let head = clauses[k].head;
                live[head.0] -= 1;
                if live[head.0] == 0 {
                    next_false.push(head);
                }
            }
        }
        to_true = next_true;
        to_false = next_false;
    }

    FittingIteration {
        model,
        stage,
        stages: current,
    }
}

/// The Fitting (Kripke-Kleene) model: least fixed point of [`fitting_step`].
pub fn fitting_model(g: &GroundProgram) -> ThreeValuedInterpretation {
    fitting_iteration(g).model
}

/// The two-valued interpretation of the atoms true in `i3`.
pub fn positive_part(i3: &ThreeValuedInterpretation) -> Interpretation {
    i3.true_part()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::syntax::{ground_program, parse_program};
    use proptest::prelude::*;

    fn ground(text: &str) -> GroundProgram {
        ground_program(&parse_program(text).unwrap(), 0).unwrap()
    }

    fn interp(g: &GroundProgram, names: &[&str]) -> Interpretation {
        Interpretation::from_atoms(
            g.atom_count(),
            names.iter().map(|n| {
                g.base()
                    .id(&crate::syntax::parse_atom(n).unwrap())
                    .unwrap_or_else(|| panic!("no atom {n}"))
            }),
        )
    }

    // Independent evaluation of the immediate consequence operator over atom
    // names, used as the oracle for tp_step.
    fn tp_oracle(g: &GroundProgram, true_names: &[&str]) -> Vec<String> {
        let holds = |a: AtomId| true_names.contains(&g.base().atom(a).to_string().as_str());
        let mut out: Vec<String> = g
            .clauses()
            .iter()
            .filter(|c| c.pos.iter().all(|&a| holds(a)) && c.neg.iter().all(|&b| !holds(b)))
            .map(|c| g.base().atom(c.head).to_string())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn names(g: &GroundProgram, i: &Interpretation) -> Vec<String> {
        let mut v: Vec<String> = i.atoms().map(|a| g.base().atom(a).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn tp_step_examples() {
        let fix_p1 = ground("q. p :- not r.");
        let out = tp_step(&fix_p1, &interp(&fix_p1, &["r"]));
        assert_eq!(names(&fix_p1, &out), tp_oracle(&fix_p1, &["r"]));
        assert_eq!(names(&fix_p1, &out), vec!["q"]);

        let p2 = ground("p :- not q. q :- not p.");
        let out = tp_step(&p2, &Interpretation::empty(2));
        assert_eq!(names(&p2, &out), tp_oracle(&p2, &[]));
        assert_eq!(names(&p2, &out), vec!["p", "q"]);

        let empty = ground("");
        assert!(tp_step(&empty, &Interpretation::empty(0)).is_empty());
    }

    #[test]
    fn least_model_examples() {
        let d = DefiniteProgram::new(ground("a. b :- a. c :- b.")).unwrap();
        assert_eq!(names(d.program(), &least_model(&d)), vec!["a", "b", "c"]);
        let d = DefiniteProgram::new(ground("")).unwrap();
        assert!(least_model(&d).is_empty());
        let d = DefiniteProgram::new(ground("p :- p.")).unwrap();
        assert!(least_model(&d).is_empty());
        assert!(DefiniteProgram::new(ground("p :- not q.")).is_none());
    }

    #[test]
    fn gl_transform_examples() {
        let p2 = ground("p :- not q. q :- not p.");
        let reduct = gl_transform(&p2, &interp(&p2, &["p"]));
        assert_eq!(reduct.program().to_string(), "p.\n");

        let definite = ground("a. b :- a, c.");
        let i = interp(&definite, &["c"]);
        assert_eq!(
            gl_transform(&definite, &i).program().to_string(),
            definite.to_string()
        );

        let p3 = ground("p :- not p.");
        assert!(gl_transform(&p3, &interp(&p3, &["p"])).program().is_empty());
    }

    #[test]
    fn gl_operator_examples() {
        let p2 = ground("p :- not q. q :- not p.");
        let i = interp(&p2, &["p"]);
        assert_eq!(gl_operator(&p2, &i), i);

        let p3 = ground("p :- not p.");
        assert_eq!(
            names(&p3, &gl_operator(&p3, &Interpretation::empty(1))),
            vec!["p"]
        );
        assert!(gl_operator(&p3, &interp(&p3, &["p"])).is_empty());

        let p4 = ground("p :- p.");
        for i in Interpretation::enumerate(1) {
            assert!(gl_operator(&p4, &i).is_empty());
        }
    }

    #[test]
    fn fitting_step_examples() {
        let p1 = ground("p :- q, not r. q.");
        let step = fitting_step(&p1, &ThreeValuedInterpretation::undefined(3));
        assert_eq!(names(&p1, &step.true_part()), vec!["q"]);
        assert_eq!(names(&p1, &step.false_part()), vec!["r"]);

        let p3 = ground("p :- not p.");
        let step = fitting_step(&p3, &ThreeValuedInterpretation::undefined(1));
        assert_eq!(step, ThreeValuedInterpretation::undefined(1));

        let base = std::sync::Arc::new(crate::syntax::AtomEnumeration::from_atoms(
            ["a", "b"].map(crate::syntax::Atom::prop),
        ));
        let empty = GroundProgram::new(base, []);
        let step = fitting_step(&empty, &ThreeValuedInterpretation::undefined(2));
        assert_eq!(step.false_part(), Interpretation::full(2));
    }

    #[test]
    fn fitting_model_examples() {
        let fix_p1 = ground("q. p :- not r.");
        let m = fitting_model(&fix_p1);
        assert_eq!(names(&fix_p1, &m.true_part()), vec!["p", "q"]);
        assert_eq!(names(&fix_p1, &m.false_part()), vec!["r"]);

        let p3 = ground("p :- not p.");
        assert_eq!(fitting_model(&p3), ThreeValuedInterpretation::undefined(1));

        let d = ground("a. b :- a. c :- d.");
        let m = fitting_model(&d);
        assert_eq!(names(&d, &m.true_part()), vec!["a", "b"]);
        assert_eq!(names(&d, &m.false_part()), vec!["c", "d"]);
    }

    #[test]
    fn positive_part_projects() {
        let t = Interpretation::from_atoms(3, [AtomId(0), AtomId(1)]);
        let f = Interpretation::from_atoms(3, [AtomId(2)]);
        assert_eq!(
            positive_part(&ThreeValuedInterpretation::new(t.clone(), f)),
            t
        );
        assert!(positive_part(&ThreeValuedInterpretation::undefined(2)).is_empty());
    }

    #[test]
    fn fitting_stages_record_decision_order() {
        let g = ground("r. q :- not r. p :- not q.");
        let it = fitting_iteration(&g);
        let stage_of = |n: &str| it.stage[g.base().id(&crate::syntax::Atom::prop(n)).unwrap().0];
        assert_eq!(stage_of("r"), Some(1));
        assert_eq!(stage_of("q"), Some(2));
        assert_eq!(stage_of("p"), Some(3));
        assert_eq!(it.stages, 3);
    }

    // Random ground propositional programs for the exhaustive properties.
    pub(crate) fn arb_program(max_atoms: usize) -> impl Strategy<Value = GroundProgram> {
        (1..=max_atoms).prop_flat_map(|n| {
            let clause = (
                0..n,
                prop::collection::vec(0..n, 0..3),
                prop::collection::vec(0..n, 0..3),
            );
            prop::collection::vec(clause, 0..8).prop_map(move |raw| {
                let base = std::sync::Arc::new(crate::syntax::AtomEnumeration::from_atoms(
                    (0..n).map(|k| crate::syntax::Atom::prop(format!("a{k}"))),
                ));
                GroundProgram::new(
                    base,
                    raw.into_iter().map(|(h, p, q)| {
                        GroundClause::new(
                            AtomId(h),
                            p.into_iter().map(AtomId),
                            q.into_iter().map(AtomId),
                        )
                    }),
                )
            })
        })
    }

    fn definite_part(g: &GroundProgram) -> GroundProgram {
        g.with_clauses(
            g.clauses()
                .iter()
                .map(|c| GroundClause::new(c.head, c.pos.iter().copied(), [])),
        )
    }

    fn all_three_valued(n: usize) -> Vec<ThreeValuedInterpretation> {
        (0..3usize.pow(n as u32))
            .map(|mut code| {
                let mut t = Interpretation::empty(n);
                let mut f = Interpretation::empty(n);
                for k in 0..n {
                    match code % 3 {
                        1 => {
                            t.insert(AtomId(k));
                        }
                        2 => {
                            f.insert(AtomId(k));
                        }
                        _ => {}
                    }
                    code /= 3;
                }
                ThreeValuedInterpretation::new(t, f)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tp_monotone_on_definite(g in arb_program(8)) {
            let d = definite_part(&g);
            let n = d.atom_count();
            let images: Vec<_> = Interpretation::enumerate(n).map(|i| tp_step(&d, &i)).collect();
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    if a & b == a {
                        prop_assert!(images[a as usize].is_subset(&images[b as usize]));
                    }
                }
            }
        }

        #[test]
        fn least_model_is_least_fixed_point(g in arb_program(8)) {
            let d = DefiniteProgram::new(definite_part(&g)).unwrap();
            let lm = least_model(&d);
            prop_assert_eq!(tp_step(d.program(), &lm), lm.clone());
            for i in Interpretation::enumerate(d.program().atom_count()) {
                if tp_step(d.program(), &i) == i {
                    prop_assert!(lm.is_subset(&i));
                }
            }
            // union of the finite iterates
            let mut iterate = Interpretation::empty(d.program().atom_count());
            loop {
                let next = tp_step(d.program(), &iterate);
                if next == iterate { break; }
                iterate = next;
            }
            prop_assert_eq!(iterate, lm);
        }

        #[test]
        fn gl_is_antimonotone(g in arb_program(6)) {
            let n = g.atom_count();
            let images: Vec<_> = Interpretation::enumerate(n).map(|i| gl_operator(&g, &i)).collect();
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    if a & b == a {
                        prop_assert!(images[b as usize].is_subset(&images[a as usize]));
                    }
                }
            }
        }

        #[test]
        fn gl_operator_matches_materialised_reduct(g in arb_program(6)) {
            for i in Interpretation::enumerate(g.atom_count()) {
                prop_assert_eq!(gl_operator(&g, &i), least_model(&gl_transform(&g, &i)));
            }
        }

        #[test]
        fn fitting_step_monotone_in_knowledge_order(g in arb_program(4)) {
            let all = all_three_valued(g.atom_count());
            let images: Vec<_> = all.iter().map(|i| fitting_step(&g, i)).collect();
            for (x, fx) in all.iter().zip(&images) {
                for (y, fy) in all.iter().zip(&images) {
                    if x.knowledge_leq(y) {
                        prop_assert!(fx.knowledge_leq(fy));
                    }
                }
            }
        }

        #[test]
        fn staged_fitting_matches_naive_iterates(g in arb_program(8)) {
            let it = fitting_iteration(&g);
            let mut iterate = ThreeValuedInterpretation::undefined(g.atom_count());
            let mut n = 0;
            loop {
                let next = fitting_step(&g, &iterate);
                if next == iterate { break; }
                n += 1;
                for a in g.base().ids() {
                    if iterate.value(a) == TruthValue::Undefined && next.value(a) != TruthValue::Undefined {
                        prop_assert_eq!(it.stage[a.0], Some(n));
                    }
                }
                iterate = next;
            }
            prop_assert_eq!(n, it.stages);
            prop_assert_eq!(iterate, it.model);
        }

        #[test]
        fn fitting_true_part_on_definite_is_least_model(g in arb_program(8)) {
            let d = DefiniteProgram::new(definite_part(&g)).unwrap();
            prop_assert_eq!(fitting_model(d.program()).true_part(), least_model(&d));
        }

        #[test]
        fn model_iff_tp_below(g in arb_program(6)) {
            for i in Interpretation::enumerate(g.atom_count()) {
                prop_assert_eq!(is_model(&g, &i), tp_step(&g, &i).is_subset(&i));
            }
        }
    }
}
