use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixcomp::{fixpoint_completion, quasi_as_ground, QuasiInterpretation};
use crate::metrics::{
    check_locally_hierarchical, continuity_witness, contraction_report, find_local_stratification,
    iterate_gl, level_from_fitting, validate_witness, ContinuityWitness, Metric, PairMode,
    DEFAULT_PAIR_CAP,
};
use crate::operators::{fitting_model, gl_operator, tp_step, Interpretation};
use crate::syntax::GroundProgram;

use super::{
    stable_models, stable_models_bruteforce, supported_models, well_founded_model, Route,
    DEFAULT_EXHAUSTIVE_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The property harnesses, one per checked statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// `GL_P(I) = T_fix(P)(I)` for every interpretation.
    GlMatchesFix,
    /// Facts of the unfolding iterates equal the `T_P` iterates (definite
    /// programs).
    DefiniteFacts,
    /// Well-founded model of `P` equals the Fitting model of `fix(P)`.
    WfFitting,
    /// Total well-founded model: GL iteration from the empty set reaches its
    /// true part, the unique stable model.
    TotalWf,
    /// Every converging GL iteration ends in a stable model.
    GlLimits,
    /// Locally stratified programs: `fix(P)` is locally hierarchical and GL
    /// strictly contracts `d_l`.
    StratifiedContraction,
    /// Total Fitting model of `fix(P)`: GL strictly contracts `ρ`.
    DislocatedContraction,
    /// Every false atom of `GL(I)` has a finite continuity witness.
    Continuity,
    /// The three stable-model routes agree.
    Routes,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::GlMatchesFix,
        Check::DefiniteFacts,
        Check::WfFitting,
        Check::TotalWf,
        Check::GlLimits,
        Check::StratifiedContraction,
        Check::DislocatedContraction,
        Check::Continuity,
        Check::Routes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::GlMatchesFix => "gl-fix",
            Check::DefiniteFacts => "definite-facts",
            Check::WfFitting => "wf-fitting",
            Check::TotalWf => "total-wf",
            Check::GlLimits => "gl-limits",
            Check::StratifiedContraction => "stratified",
            Check::DislocatedContraction => "dislocated",
            Check::Continuity => "continuity",
            Check::Routes => "routes",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Bases up to this size are enumerated exhaustively; larger ones are
    /// sampled where the check allows it and refused otherwise.
    pub max_atoms: usize,
    /// Cap on GL iteration length.
    pub max_iter: usize,
    /// Largest base for exhaustive pairwise contraction checks.
    pub pair_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_atoms: DEFAULT_EXHAUSTIVE_CAP,
            max_iter: 10_000,
            pair_cap: DEFAULT_PAIR_CAP,
            samples: 4096,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: Check,
    pub outcome: Outcome,
    /// Number of elementary comparisons made (interpretations, pairs, probes).
    pub checked: u64,
    /// Summary on success, the witness on failure, the reason when the check
    /// does not apply.
    pub detail: String,
}

impl CheckReport {
    fn new(check: Check, outcome: Outcome, checked: u64, detail: impl Into<String>) -> Self {
        Self {
            check,
            outcome,
            checked,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

/// All interpretations when the base is small enough, a seeded sample
/// otherwise.
fn probe_points(n: usize, opts: &CheckOptions) -> (Vec<Interpretation>, bool) {
    if n <= opts.max_atoms {
        return (Interpretation::enumerate(n).collect(), true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let points = (0..opts.samples)
        .map(|_| {
            Interpretation::from_atoms(
                n,
                (0..n)
                    .filter(|_| rng.random_bool(0.5))
                    .map(crate::syntax::AtomId),
            )
        })
        .collect();
    (points, false)
}

fn pair_mode(n: usize, opts: &CheckOptions) -> PairMode {
    if n <= opts.pair_cap {
        PairMode::Exhaustive {
            max_atoms: opts.pair_cap,
        }
    } else {
        PairMode::Sample {
            pairs: opts.samples,
            seed: opts.seed,
        }
    }
}

pub fn check_gl_matches_fix(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let fix = fixpoint_completion(g)?;
    Ok(check_gl_matches_fix_against(g, fix.fix(), opts))
}

/// Compares `GL_P` with the immediate consequence operator of an arbitrary
/// quasi-interpretation; used with mutated completions as a negative control.
pub fn check_gl_matches_fix_against(
    g: &GroundProgram,
    fix: &QuasiInterpretation,
    opts: &CheckOptions,
) -> CheckReport {
    let q = quasi_as_ground(fix);
    let (points, exhaustive) = probe_points(g.atom_count(), opts);
    let total = points.len() as u64;
    for (k, i) in points.iter().enumerate() {
        let gl = gl_operator(g, i);
        let tp = tp_step(&q, i);
        if gl != tp {
            let base = g.base();
            return CheckReport::new(
                Check::GlMatchesFix,
                Outcome::Fail,
                k as u64 + 1,
                format!(
                    "I = {}: GL(I) = {}, T_fix(I) = {}",
                    i.render(base),
                    gl.render(base),
                    tp.render(base)
                ),
            );
        }
    }
    let scope = if exhaustive { "" } else { " (sampled)" };
    CheckReport::new(
        Check::GlMatchesFix,
        Outcome::Pass,
        total,
        format!("{total}/{total} interpretations{scope}"),
    )
}

pub fn check_definite_facts(g: &GroundProgram) -> Result<CheckReport> {
    if !g.is_definite() {
        return Ok(CheckReport::new(
            Check::DefiniteFacts,
            Outcome::NotApplicable,
            0,
            "program has negative body literals",
        ));
    }
    let completion = fixpoint_completion(g)?;
    let k = completion.stabilized_at();
    let mut tp = Interpretation::empty(g.atom_count());
    for n in 0..=k {
        let facts = completion.iterate(n).facts();
        if facts != tp {
            return Ok(CheckReport::new(
                Check::DefiniteFacts,
                Outcome::Fail,
                n as u64 + 1,
                format!(
                    "n = {n}: facts of the unfolding iterate {} but T_P iterate {}",
                    facts.render(g.base()),
                    tp.render(g.base())
                ),
            ));
        }
        tp = tp_step(g, &tp);
    }
    Ok(CheckReport::new(
        Check::DefiniteFacts,
        Outcome::Pass,
        k as u64 + 1,
        format!("iterates 0..={k} agree"),
    ))
}

pub fn check_routes(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let brute = stable_models_bruteforce(g, opts.max_atoms)?;
    let supported = supported_models(g, opts.max_atoms)?;
    if !brute.models.is_subset(&supported) {
        return Ok(CheckReport::new(
            Check::Routes,
            Outcome::Fail,
            1,
            "a stable model is not supported",
        ));
    }
    for route in [Route::Fixcomp, Route::Completion] {
        let other = stable_models(g, route, opts.max_atoms)?;
        if !other.same_models(&brute) {
            return Ok(CheckReport::new(
                Check::Routes,
                Outcome::Fail,
                1,
                format!(
                    "brute [{}] vs {route} [{}]",
                    brute.render_lines(g.base()).join(" "),
                    other.render_lines(g.base()).join(" ")
                ),
            ));
        }
    }
    Ok(CheckReport::new(
        Check::Routes,
        Outcome::Pass,
        3,
        format!("3 routes agree on {} stable models", brute.len()),
    ))
}

/// Drops the `k`-th clause of `fix(P)` and reports whether the supported
/// models of the result differ from the stable models of `P`.
pub fn route_mutation_detected(g: &GroundProgram, k: usize, max_atoms: usize) -> Result<bool> {
    let fix = fixpoint_completion(g)?;
    let mutated = quasi_as_ground(&fix.fix().without(k));
    let brute = stable_models_bruteforce(g, max_atoms)?;
    Ok(supported_models(&mutated, max_atoms)? != brute.models)
}

pub fn check_wf_fitting(g: &GroundProgram) -> Result<CheckReport> {
    let fix = fixpoint_completion(g)?;
    let wf = well_founded_model(g);
    let fitting = fitting_model(&quasi_as_ground(fix.fix()));
    let base = g.base();
    Ok(if wf == fitting {
        CheckReport::new(Check::WfFitting, Outcome::Pass, 1, wf.render(base))
    } else {
        CheckReport::new(
            Check::WfFitting,
            Outcome::Fail,
            1,
            format!(
                "well-founded {} vs Fitting of fix {}",
                wf.render(base),
                fitting.render(base)
            ),
        )
    })
}

fn not_total(check: Check, g: &GroundProgram, atom: crate::syntax::AtomId) -> CheckReport {
    CheckReport::new(
        check,
        Outcome::NotApplicable,
        0,
        format!(
            "well-founded model is not total: {} undefined",
            g.base().atom(atom)
        ),
    )
}

pub fn check_total_wf(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let wf = well_founded_model(g);
    if let Some(a) = wf.undefined_atoms().next() {
        return Ok(not_total(Check::TotalWf, g, a));
    }
    let target = wf.true_part();
    let base = g.base();
    let trace = iterate_gl(g, &Interpretation::empty(g.atom_count()), opts.max_iter);
    if trace.limit() != Some(&target) {
        return Ok(CheckReport::new(
            Check::TotalWf,
            Outcome::Fail,
            trace.len() as u64,
            format!(
                "iteration from {{}} ends with {:?} at {}, expected fixed point {}",
                trace.outcome,
                trace.states.last().expect("non-empty").render(base),
                target.render(base)
            ),
        ));
    }
    let stable = stable_models_bruteforce(g, opts.max_atoms)?;
    if stable.len() != 1 || !stable.contains(&target) {
        return Ok(CheckReport::new(
            Check::TotalWf,
            Outcome::Fail,
            trace.len() as u64,
            format!("stable models [{}]", stable.render_lines(base).join(" ")),
        ));
    }
    Ok(CheckReport::new(
        Check::TotalWf,
        Outcome::Pass,
        trace.len() as u64,
        format!(
            "trace length {}, limit {} is the unique stable model",
            trace.len(),
            target.render(base)
        ),
    ))
}

pub fn check_gl_limits(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let stable = stable_models_bruteforce(g, opts.max_atoms)?;
    let (points, _) = probe_points(g.atom_count(), opts);
    let mut converged = 0u64;
    for i in &points {
        let trace = iterate_gl(g, i, opts.max_iter);
        if let Some(limit) = trace.limit() {
            converged += 1;
            if !stable.contains(limit) {
                return Ok(CheckReport::new(
                    Check::GlLimits,
                    Outcome::Fail,
                    converged,
                    format!(
                        "iteration from {} converges to {}, not a stable model",
                        i.render(g.base()),
                        limit.render(g.base())
                    ),
                ));
            }
        }
    }
    Ok(CheckReport::new(
        Check::GlLimits,
        Outcome::Pass,
        points.len() as u64,
        format!(
            "{converged} of {} iterations converge, all to stable models",
            points.len()
        ),
    ))
}

pub fn check_stratified_contraction(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let l = match find_local_stratification(g) {
        Ok(l) => l,
        Err(cycle) => {
            return Ok(CheckReport::new(
                Check::StratifiedContraction,
                Outcome::NotApplicable,
                0,
                format!("not locally stratified: {}", cycle.render(g.base())),
            ))
        }
    };
    let fail = |checked, detail: String| {
        CheckReport::new(Check::StratifiedContraction, Outcome::Fail, checked, detail)
    };
    let fix = fixpoint_completion(g)?;
    if !check_locally_hierarchical(&quasi_as_ground(fix.fix()), &l) {
        return Ok(fail(
            0,
            format!(
                "fix is not locally hierarchical under {}",
                l.render(g.base())
            ),
        ));
    }
    let report = contraction_report(g, &l, &Metric::Ultrametric, pair_mode(g.atom_count(), opts))?;
    if let Some(v) = report.violations.first() {
        return Ok(fail(
            report.pairs_checked,
            format!(
                "{} violations; first: I = {}, J = {}, d = {}, d(GL) = {}",
                report.violation_count,
                v.i.render(g.base()),
                v.j.render(g.base()),
                v.before,
                v.after
            ),
        ));
    }
    let stable = stable_models_bruteforce(g, opts.max_atoms)?;
    if stable.len() != 1 {
        return Ok(fail(
            report.pairs_checked,
            format!("{} stable models", stable.len()),
        ));
    }
    Ok(CheckReport::new(
        Check::StratifiedContraction,
        Outcome::Pass,
        report.pairs_checked,
        format!(
            "levels {}; {} pairs contract; unique stable model",
            l.render(g.base()),
            report.pairs_checked
        ),
    ))
}

pub fn check_dislocated_contraction(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let fix = fixpoint_completion(g)?;
    let (l, anchor) = match level_from_fitting(fix.fix()) {
        Ok(found) => found,
        Err(Error::NotTotal { atom }) => {
            return Ok(CheckReport::new(
                Check::DislocatedContraction,
                Outcome::NotApplicable,
                0,
                format!("Fitting model of fix is not total: {atom} undefined"),
            ))
        }
        Err(e) => return Err(e),
    };
    let report = contraction_report(
        g,
        &l,
        &Metric::Dislocated { anchor },
        pair_mode(g.atom_count(), opts),
    )?;
    Ok(match report.violations.first() {
        Some(v) => CheckReport::new(
            Check::DislocatedContraction,
            Outcome::Fail,
            report.pairs_checked,
            format!(
                "{} violations; first: J = {}, K = {}, rho = {}, rho(GL) = {}",
                report.violation_count,
                v.i.render(g.base()),
                v.j.render(g.base()),
                v.before,
                v.after
            ),
        ),
        None => CheckReport::new(
            Check::DislocatedContraction,
            Outcome::Pass,
            report.pairs_checked,
            format!(
                "levels {}; {} pairs contract",
                l.render(g.base()),
                report.pairs_checked
            ),
        ),
    })
}

pub fn check_continuity(g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    let n = g.atom_count();
    let (points, _) = probe_points(n, opts);
    let (mut probes, mut witnesses) = (0u64, 0u64);
    for i in &points {
        let image = gl_operator(g, i);
        for a in g.base().ids().filter(|&a| !image.contains(a)) {
            probes += 1;
            let fail =
                |detail: String| CheckReport::new(Check::Continuity, Outcome::Fail, probes, detail);
            match continuity_witness(g, i, a, n)? {
                ContinuityWitness::NoClause => {}
                ContinuityWitness::WitnessSet(s) => {
                    if !validate_witness(g, i, a, &s) {
                        return Ok(fail(format!(
                            "I = {}, A = {}: witness {} fails re-validation",
                            i.render(g.base()),
                            g.base().atom(a),
                            g.base().render_set(s)
                        )));
                    }
                    witnesses += 1;
                }
                ContinuityWitness::Exhausted { bound } => {
                    return Ok(fail(format!(
                        "I = {}, A = {}: no witness within {bound} atoms",
                        i.render(g.base()),
                        g.base().atom(a)
                    )))
                }
            }
        }
    }
    Ok(CheckReport::new(
        Check::Continuity,
        Outcome::Pass,
        probes,
        format!(
            "{probes} probes, {witnesses} witness sets, {} without clauses",
            probes - witnesses
        ),
    ))
}

pub fn run_check(check: Check, g: &GroundProgram, opts: &CheckOptions) -> Result<CheckReport> {
    match check {
        Check::GlMatchesFix => check_gl_matches_fix(g, opts),
        Check::DefiniteFacts => check_definite_facts(g),
        Check::WfFitting => check_wf_fitting(g),
        Check::TotalWf => check_total_wf(g, opts),
        Check::GlLimits => check_gl_limits(g, opts),
        Check::StratifiedContraction => check_stratified_contraction(g, opts),
        Check::DislocatedContraction => check_dislocated_contraction(g, opts),
        Check::Continuity => check_continuity(g, opts),
        Check::Routes => check_routes(g, opts),
    }
}
