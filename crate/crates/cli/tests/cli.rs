use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn fixcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixcomp_prints_completion_and_steps() {
    let o = fixcomp(&["fixcomp", &fixture("p1.lp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q.\np :- not r.\n% stabilized at k = 3\n");

    let o = fixcomp(&["fixcomp", &fixture("p4.lp")]);
    assert_eq!(stdout(&o), "% stabilized at k = 1\n");
}

#[test]
fn completion_output_reparses() {
    let o = fixcomp(&["fixcomp", &fixture("p5.lp")]);
    let dir = std::env::temp_dir().join(format!("fixcomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fix.lp");
    std::fs::write(&path, stdout(&o)).unwrap();
    let again = fixcomp(&["models", path.to_str().unwrap()]);
    let direct = fixcomp(&["models", &fixture("p5.lp")]);
    assert_eq!(again.status.code(), Some(0));
    // the completion mentions fewer atoms, so compare the single model text
    assert_eq!(
        stdout(&again),
        "{move(a, b), move(b, a), move(b, c), win(b)}\n"
    );
    assert_eq!(stdout(&direct), stdout(&again));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_input_exits_2() {
    let o = fixcomp(&["fixcomp", &fixture("bad.lp")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 11"));
    let o = fixcomp(&["ground", &fixture("missing.lp")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn models_across_routes() {
    for route in ["brute", "fixcomp", "completion"] {
        let o = fixcomp(&["models", &fixture("p2.lp"), "--route", route]);
        assert_eq!(stdout(&o), "{p}\n{q}\n", "{route}");
        let o = fixcomp(&["models", &fixture("p3.lp"), "--route", route]);
        assert_eq!((o.status.code(), stdout(&o)), (Some(0), String::new()));
    }
    let o = fixcomp(&["models", &fixture("p4.lp"), "--kind", "supported"]);
    assert_eq!(stdout(&o), "{}\n{p}\n");
    let o = fixcomp(&["models", &fixture("p4.lp")]);
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn cap_exceeded_exits_3() {
    let o = fixcomp(&["models", &fixture("p5.lp"), "--cap", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_count_record() {
    let o = fixcomp(&["models", &fixture("p3.lp"), "--json"]);
    let text = stdout(&o);
    let record: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(record["kind"], "count");
    assert_eq!(record["count"], 0);
    assert_eq!(record["command"], "models");
}

#[test]
fn verify_outcomes() {
    let o = fixcomp(&["verify", "--check", "gl-fix", &fixture("p1.lp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gl-fix pass"));
    assert!(stdout(&o).contains("8/8 interpretations"));

    let o = fixcomp(&["verify", "--check", "total-wf", &fixture("p5.lp")]);
    assert!(stdout(&o).contains("total-wf pass"));
    assert!(stdout(&o).contains("trace length 3"));

    let o = fixcomp(&["verify", "--check", "stratified", &fixture("p2.lp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not-applicable"));
    assert!(stdout(&o).contains("p ->(neg) q ->(neg) p"));
}

#[test]
fn verify_corpus_is_reproducible() {
    let args = [
        "verify",
        "--check",
        "gl-fix",
        "--check",
        "routes",
        "--corpus",
        "6,8,2,0.5",
        "--count",
        "40",
        "--seed",
        "7",
    ];
    let a = fixcomp(&args);
    let b = fixcomp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("gl-fix summary: 40 pass, 0 fail"));
    // a corpus needs an explicit seed
    let o = fixcomp(&["verify", "--check", "gl-fix", "--corpus", "6,8,2,0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diagnostics() {
    let o = fixcomp(&["diagnose", "stratify", &fixture("p6.lp")]);
    assert_eq!(stdout(&o), "r:0 q:1 p:2\n");

    let o = fixcomp(&["diagnose", "iterate", &fixture("p2.lp"), "--from", "empty"]);
    assert!(stdout(&o).ends_with("cycle length 2\n"));

    let o = fixcomp(&["diagnose", "iterate", &fixture("p5.lp")]);
    assert!(stdout(&o).ends_with("fixed point after 3 states\n"));

    let o = fixcomp(&["diagnose", "embed", &fixture("p1.lp"), "--interp", "q,p"]);
    assert_eq!(stdout(&o), "8/9\n");
    let o = fixcomp(&["diagnose", "embed", &fixture("p1.lp"), "--decode", "1/3"]);
    assert_eq!(o.status.code(), Some(4));

    let o = fixcomp(&[
        "diagnose",
        "continuity",
        &fixture("p1.lp"),
        "--interp",
        "r",
        "--atom",
        "p",
    ]);
    assert_eq!(stdout(&o), "witness {r}\n");
    let o = fixcomp(&[
        "diagnose",
        "continuity",
        &fixture("p1.lp"),
        "--interp",
        "empty",
        "--atom",
        "q",
    ]);
    assert_eq!(o.status.code(), Some(4));

    let o = fixcomp(&["diagnose", "contract", &fixture("p6.lp")]);
    assert!(stdout(&o).ends_with("28 pairs, 0 violations\n"));
    let o = fixcomp(&["diagnose", "contract", &fixture("p2.lp")]);
    assert_eq!(o.status.code(), Some(4));
    let o = fixcomp(&[
        "diagnose",
        "contract",
        &fixture("p2.lp"),
        "--levels",
        "enumeration",
    ]);
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn truncated_grounding_is_reported() {
    let o = fixcomp(&["ground", &fixture("nat.lp"), "--bound", "2"]);
    assert_eq!(
        stdout(&o),
        "p(0).\np(s(0)) :- p(0).\np(s(s(0))) :- p(s(0)).\n% 3 clauses, 3 atoms, bound 2, truncated\n"
    );
}

#[test]
fn output_is_byte_identical() {
    let args = [
        "diagnose",
        "contract",
        &fixture("p5.lp"),
        "--metric",
        "rho",
        "--json",
    ];
    let (a, b) = (fixcomp(&args), fixcomp(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
