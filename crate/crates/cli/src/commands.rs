use std::fs;
use std::path::Path;

use fixcomp_core::fixcomp::{clark_completion, fixpoint_completion};
use fixcomp_core::metrics::{
    cantor_decode, cantor_embed, continuity_witness, contraction_report, find_local_stratification,
    iterate_gl, level_from_fitting, ContinuityWitness, IterationOutcome, LevelMapping, Metric,
    PairMode,
};
use fixcomp_core::operators::Interpretation;
use fixcomp_core::semantics::{
    generate_corpus, run_check, stable_models, supported_models, CheckOptions, CorpusSpec,
    ModelSet, Outcome, Route,
};
use fixcomp_core::syntax::{ground_program, parse_atom, parse_program, GroundProgram};
use fixcomp_core::Error;

use crate::output::{sha256_hex, Output};
use crate::{Cli, Command, Diagnose, Failure, Kind, LevelsArg, MetricArg, VerifyArgs};

type CommandResult = Result<String, (String, Failure)>;

struct Loaded {
    name: String,
    digest: String,
    program: GroundProgram,
}

fn load(path: &Path, bound: usize) -> Result<Loaded, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))?;
    let program = ground_program(&parse_program(&text)?, bound)?;
    Ok(Loaded {
        name: path.display().to_string(),
        digest: sha256_hex(&bytes),
        program,
    })
}

/// Runs `body` against a fresh output buffer, keeping whatever was written
/// when it fails.
fn with_output(
    cli: &Cli,
    command: &'static str,
    loaded: &Loaded,
    body: impl FnOnce(&mut Output) -> Result<(), Failure>,
) -> CommandResult {
    let mut out = Output::new(
        cli.json,
        command,
        loaded.name.clone(),
        loaded.digest.clone(),
    );
    match body(&mut out) {
        Ok(()) => Ok(out.render()),
        Err(f) => Err((out.render(), f)),
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let load = |path: &Path| load(path, cli.bound).map_err(|f| (String::new(), f));
    match &cli.command {
        Command::Ground { file } => {
            let l = load(file)?;
            with_output(cli, "ground", &l, |out| ground(out, &l.program))
        }
        Command::Fixcomp {
            file,
            subsume,
            clark,
        } => {
            let l = load(file)?;
            with_output(cli, "fixcomp", &l, |out| {
                fixcomp(out, &l.program, *subsume, *clark)
            })
        }
        Command::Models { file, route, kind } => {
            let l = load(file)?;
            with_output(cli, "models", &l, |out| {
                models(out, &l.program, (*route).into(), *kind, cli.cap)
            })
        }
        Command::Verify(args) => verify(cli, args),
        Command::Diagnose { what } => diagnose(cli, what),
    }
}

fn ground(out: &mut Output, g: &GroundProgram) -> Result<(), Failure> {
    for c in g.clauses() {
        let line = c.display(g.base()).to_string();
        out.emit("clause", "ok", &line, 1, line.clone());
    }
    let summary = format!(
        "{} clauses, {} atoms, bound {}{}",
        g.len(),
        g.atom_count(),
        g.grounding_bound(),
        if g.is_exact() { "" } else { ", truncated" }
    );
    out.emit(
        "summary",
        "ok",
        &summary,
        g.len() as u64,
        format!("% {summary}"),
    );
    Ok(())
}

fn fixcomp(out: &mut Output, g: &GroundProgram, subsume: bool, clark: bool) -> Result<(), Failure> {
    let completion = fixpoint_completion(g)?;
    let k = completion.stabilized_at();
    let fix = if subsume {
        completion.fix().subsumption_reduced()
    } else {
        completion.into_fix()
    };
    let text = if clark {
        clark_completion(&fix).to_string()
    } else {
        fix.to_string()
    };
    for line in text.lines() {
        out.emit(
            if clark { "definition" } else { "clause" },
            "ok",
            line,
            1,
            line,
        );
    }
    out.emit(
        "stabilized",
        "ok",
        &k.to_string(),
        k as u64,
        format!("% stabilized at k = {k}"),
    );
    Ok(())
}

fn models(
    out: &mut Output,
    g: &GroundProgram,
    route: Route,
    kind: Kind,
    cap: usize,
) -> Result<(), Failure> {
    let set = match kind {
        Kind::Stable => stable_models(g, route, cap)?,
        Kind::Supported => ModelSet {
            route,
            models: supported_models(g, cap)?,
        },
    };
    for line in set.render_lines(g.base()) {
        out.emit("model", "ok", &line, 1, line.clone());
    }
    out.record("count", "ok", &set.len().to_string(), set.len() as u64);
    Ok(())
}

fn check_options(cli: &Cli) -> CheckOptions {
    CheckOptions {
        max_atoms: cli.cap,
        ..CheckOptions::default()
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> CommandResult {
    let checks: Vec<_> = args.checks.iter().flatten().copied().collect();
    let opts = check_options(cli);
    let (input, digest, programs): (String, String, Vec<(String, GroundProgram)>) =
        match (&args.file, &args.corpus) {
            (Some(path), _) => {
                let l = load(path, cli.bound).map_err(|f| (String::new(), f))?;
                (l.name.clone(), l.digest, vec![(l.name, l.program)])
            }
            (None, Some(spec)) => {
                let seed = args.seed.expect("clap enforces --seed with --corpus");
                let spec = CorpusSpec::parse(spec, seed, args.count)
                    .map_err(|e| (String::new(), Failure::Core(e)))?;
                let corpus = generate_corpus(&spec);
                let text: String = corpus.iter().map(|g| g.to_string() + "\n").collect();
                let input = format!(
                    "corpus {},{},{},{}{} count {} seed {}",
                    spec.n_atoms,
                    spec.n_clauses,
                    spec.max_body,
                    spec.neg_prob,
                    if spec.stratified_only {
                        ",stratified"
                    } else {
                        ""
                    },
                    spec.count,
                    spec.seed
                );
                let programs = corpus
                    .into_iter()
                    .enumerate()
                    .map(|(k, g)| (format!("#{k}"), g))
                    .collect();
                (input, sha256_hex(text.as_bytes()), programs)
            }
            (None, None) => unreachable!("clap requires a file or a corpus"),
        };

    let mut out = Output::new(cli.json, "verify", input, digest);
    out.header();
    let single = programs.len() == 1;
    let mut any_failed = false;
    for check in &checks {
        let (mut pass, mut fail, mut na) = (0u64, 0u64, 0u64);
        for (name, g) in &programs {
            let report = match run_check(*check, g, &opts) {
                Ok(r) => r,
                Err(e) => return Err((out.render(), Failure::Core(e))),
            };
            match report.outcome {
                Outcome::Pass => pass += 1,
                Outcome::Fail => fail += 1,
                Outcome::NotApplicable => na += 1,
            }
            if single || report.outcome == Outcome::Fail {
                out.emit(
                    check.name(),
                    report.outcome.name(),
                    &report.detail,
                    report.checked,
                    format!("{check} {} {name}: {}", report.outcome, report.detail),
                );
            }
            if !single && report.outcome == Outcome::Fail {
                for line in g.to_string().lines() {
                    out.text(format!("%   {line}"));
                }
            }
        }
        any_failed |= fail > 0;
        if !single {
            let summary = format!("{pass} pass, {fail} fail, {na} not-applicable");
            out.emit(
                check.name(),
                if fail > 0 { "fail" } else { "pass" },
                &summary,
                programs.len() as u64,
                format!("{check} summary: {summary}"),
            );
        }
    }
    if any_failed {
        Err((out.render(), Failure::ChecksFailed))
    } else {
        Ok(out.render())
    }
}

/// Splits at commas outside parentheses, so `move(a,b),win(a)` yields two
/// atoms.
fn split_atoms(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (k, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(text[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts.into_iter().filter(|p| !p.is_empty()).collect()
}

fn parse_interpretation(g: &GroundProgram, text: &str) -> Result<Interpretation, Failure> {
    let n = g.atom_count();
    let trimmed = text.trim();
    match trimmed {
        "empty" => return Ok(Interpretation::empty(n)),
        "full" => return Ok(Interpretation::full(n)),
        _ => {}
    }
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(trimmed);
    let mut ids = Vec::new();
    for part in split_atoms(inner) {
        ids.push(atom_id(g, part)?);
    }
    Ok(Interpretation::from_atoms(n, ids))
}

fn atom_id(g: &GroundProgram, text: &str) -> Result<fixcomp_core::syntax::AtomId, Failure> {
    let atom = parse_atom(text)?;
    g.base().id(&atom).ok_or_else(|| {
        Failure::Core(Error::Precondition(format!(
            "`{atom}` is not in the Herbrand base"
        )))
    })
}

fn diagnose(cli: &Cli, what: &Diagnose) -> CommandResult {
    let load = |path: &Path| load(path, cli.bound).map_err(|f| (String::new(), f));
    match what {
        Diagnose::Stratify { file } => {
            let l = load(file)?;
            with_output(cli, "diagnose", &l, |out| {
                let g = &l.program;
                match find_local_stratification(g) {
                    Ok(levels) => {
                        let text = levels.render(g.base());
                        out.emit("levels", "ok", &text, g.atom_count() as u64, text.clone());
                    }
                    Err(cycle) => {
                        let text = cycle.render(g.base());
                        out.emit(
                            "negative-cycle",
                            "not-stratified",
                            &text,
                            cycle.negated.len() as u64,
                            format!("not locally stratified: {text}"),
                        );
                    }
                }
                Ok(())
            })
        }
        Diagnose::Contract {
            file,
            metric,
            levels,
            pairs,
            seed,
        } => {
            let l = load(file)?;
            with_output(cli, "diagnose", &l, |out| {
                contract(out, &l.program, *metric, *levels, pairs.zip(*seed), cli.cap)
            })
        }
        Diagnose::Continuity {
            file,
            interp,
            atom,
            size,
        } => {
            let l = load(file)?;
            with_output(cli, "diagnose", &l, |out| {
                let g = &l.program;
                let i = parse_interpretation(g, interp)?;
                let a = atom_id(g, atom)?;
                let bound = size.unwrap_or(g.atom_count());
                let (outcome, value, line) = match continuity_witness(g, &i, a, bound)? {
                    ContinuityWitness::NoClause => (
                        "no-clause",
                        String::new(),
                        format!("no clause with head {}", g.base().atom(a)),
                    ),
                    ContinuityWitness::WitnessSet(s) => {
                        let set = g.base().render_set(s);
                        ("witness", set.clone(), format!("witness {set}"))
                    }
                    ContinuityWitness::Exhausted { bound } => (
                        "exhausted",
                        bound.to_string(),
                        format!("no witness with at most {bound} atoms"),
                    ),
                };
                out.emit("continuity", outcome, &value, 1, line);
                Ok(())
            })
        }
        Diagnose::Iterate {
            file,
            from,
            max_iter,
        } => {
            let l = load(file)?;
            with_output(cli, "diagnose", &l, |out| {
                let g = &l.program;
                let start = parse_interpretation(g, from)?;
                let trace = iterate_gl(g, &start, *max_iter);
                for (k, s) in trace.states.iter().enumerate() {
                    let text = s.render(g.base());
                    out.emit("state", "ok", &text, k as u64, format!("{k} {text}"));
                }
                let (outcome, line) = match trace.outcome {
                    IterationOutcome::FixedPoint => (
                        "fixed-point",
                        format!("fixed point after {} states", trace.len()),
                    ),
                    IterationOutcome::Cycle { length } => {
                        ("cycle", format!("cycle length {length}"))
                    }
                    IterationOutcome::CapReached => (
                        "cap-reached",
                        format!("no repetition within {max_iter} steps"),
                    ),
                };
                let count = match trace.outcome {
                    IterationOutcome::Cycle { length } => length,
                    _ => trace.len(),
                } as u64;
                out.emit("outcome", outcome, &line, count, line.clone());
                Ok(())
            })
        }
        Diagnose::Embed {
            file,
            interp,
            decode,
        } => {
            let l = load(file)?;
            with_output(cli, "diagnose", &l, |out| {
                let g = &l.program;
                if let Some(text) = interp {
                    let i = parse_interpretation(g, text)?;
                    let x = cantor_embed(&i);
                    let value = format!("{}/{}", x.numer(), x.denom());
                    out.emit("embed", "ok", &value, i.count() as u64, value.clone());
                }
                if let Some(text) = decode {
                    let x = text
                        .trim()
                        .parse()
                        .map_err(|e| Failure::Core(Error::Decode(format!("`{text}`: {e}"))))?;
                    let i = cantor_decode(&x, g.atom_count())?;
                    let value = i.render(g.base());
                    out.emit("decode", "ok", &value, i.count() as u64, value.clone());
                }
                Ok(())
            })
        }
    }
}

fn contract(
    out: &mut Output,
    g: &GroundProgram,
    metric_arg: MetricArg,
    levels_arg: Option<LevelsArg>,
    sample: Option<(usize, u64)>,
    cap: usize,
) -> Result<(), Failure> {
    let levels_arg = levels_arg.unwrap_or(match metric_arg {
        MetricArg::Dl => LevelsArg::Stratify,
        MetricArg::Rho => LevelsArg::Fitting,
    });
    let fitting = || -> Result<(LevelMapping, Interpretation), Failure> {
        Ok(level_from_fitting(fixpoint_completion(g)?.fix())?)
    };
    let levels = match levels_arg {
        LevelsArg::Stratify => find_local_stratification(g).map_err(|cycle| {
            Failure::Core(Error::Precondition(format!(
                "not locally stratified: {}",
                cycle.render(g.base())
            )))
        })?,
        LevelsArg::Fitting => fitting()?.0,
        LevelsArg::Enumeration => LevelMapping::by_enumeration(g.atom_count()),
    };
    let metric = match metric_arg {
        MetricArg::Dl => Metric::Ultrametric,
        MetricArg::Rho => Metric::Dislocated {
            anchor: fitting()?.1,
        },
    };
    let mode = match sample {
        Some((pairs, seed)) => PairMode::Sample { pairs, seed },
        None => PairMode::Exhaustive { max_atoms: cap },
    };
    let report = contraction_report(g, &levels, &metric, mode)?;
    let level_text = levels.render(g.base());
    out.emit(
        "levels",
        "ok",
        &level_text,
        g.atom_count() as u64,
        format!("levels {level_text}"),
    );
    for v in &report.violations {
        let text = format!(
            "{} {}: {} -> {}",
            v.i.render(g.base()),
            v.j.render(g.base()),
            v.before,
            v.after
        );
        out.emit("violation", "fail", &text, 1, format!("violation {text}"));
    }
    let summary = format!(
        "{} pairs, {} violations",
        report.pairs_checked, report.violation_count
    );
    out.emit(
        "contraction",
        if report.is_contracting() {
            "contracting"
        } else {
            "not-contracting"
        },
        &summary,
        report.pairs_checked,
        summary.clone(),
    );
    Ok(())
}
