use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .env_remove("WORKBENCH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn reduce_prints_both_tuples() {
    let o = run(&["reduce", "(L0,L0,L2,L3,L2,L1,L0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("red=((L0,2+1),L2,L3,L2,L1) F=(L0,L2,L3,L1)\n"));
}

#[test]
fn passing_check_exits_zero_failing_exits_one() {
    let ok = run(&["check-ainf", &fixture("exterior.cat"), "--d", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).ends_with("status: pass\n"));

    // b·a = a breaks associativity on (b, a, b) among others
    let text = std::fs::read_to_string(fixture("exterior.cat")).unwrap()
        + "mu 2 X X X in=b,a out=a coeff=T^{1}\n";
    let bad = run(&["check-ainf", &scratch("broken.cat", &text)]);
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("finding: d=3 in=("), "{out}");
    assert!(out.ends_with("status: fail\n"));
}

#[test]
fn input_errors_exit_two_with_location() {
    let o = run(&["check-ainf", &scratch("typo.cat", "object X\ngen X Q f level=0 ham=0\n")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(o.stdout.is_empty());

    assert_eq!(run(&["check-ainf", "/nonexistent/file.cat"]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "(L0,"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn machine_format_is_key_value() {
    let o = run(&["--format", "machine", "strata", "--d", "4", "--summary"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("verb=strata"));
    for l in out.lines() {
        assert!(l.split_once('=').is_some(), "not key=value: {l}");
    }
    assert!(out.contains("\nf=5,5,1\n"), "{out}");
    assert!(out.ends_with("findings=0\n"));
}

#[test]
fn output_is_deterministic_and_parallel_agnostic() {
    let cases: Vec<Vec<String>> = vec![
        vec!["strata".into(), "(L0,L0,L1,L2,L1)".into()],
        vec!["stacked".into(), "--d".into(), "4".into()],
        vec!["trees".into(), "--d".into(), "6".into()],
        vec!["check-ainf".into(), fixture("exterior.cat"), "--d".into(), "5".into()],
        vec!["check-ocha".into(), fixture("toy.ocha")],
        vec!["measure".into(), fixture("filtered.cat")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = stdout(&run(&args));
        assert_eq!(first, stdout(&run(&args)), "{args:?}");
        let mut par = vec!["--parallel"];
        par.extend(&args);
        assert_eq!(first, stdout(&run(&par)), "{args:?} --parallel");
    }
}

#[test]
fn perturbation_runs_are_seeded() {
    let path = fixture("exterior.cat");
    let with_seed = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_workbench"))
            .args(["--format", "machine", "check-ainf", &path, "--d", "3", "--perturb", "20"])
            .env("WORKBENCH_SEED", seed)
            .output()
            .unwrap();
        stdout(&o)
    };
    assert_eq!(with_seed("7"), with_seed("7"));
    let bad = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(["check-ainf", &path, "--perturb", "1"])
        .env("WORKBENCH_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn budget_and_dim_verbs() {
    let o = run(&["budget", "--case", "open", "--d", "7"]);
    assert!(stdout(&o).contains("bound=0"));
    let o = run(&["budget", "--case", "closed", "--d", "5", "--eps", "2"]);
    assert!(stdout(&o).contains("bound=-3"), "{}", stdout(&o));
    let o = run(&["budget", "--case", "continuation", "--eps", "1", "--delta1", "3/5", "--eps2", "1/2", "--delta2", "4/5"]);
    assert!(stdout(&o).contains("-1/10"));
    let o = run(&["dim", "--case", "open", "--n", "2", "--d", "3", "--d-r", "3", "--maslov", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains('1'));
    assert_eq!(run(&["dim", "--case", "open", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn unit_and_functor_verbs() {
    let o = run(&["unit", &fixture("unital.cat"), "--object", "X"]);
    assert_eq!(o.status.code(), Some(0));
    let cat = fixture("exterior.cat");
    let o = run(&["functor", &cat, &cat, &fixture("identity.fun")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("rho=0"));
    let other = fixture("unital.cat");
    let o = run(&["functor", &other, &other, &fixture("identity.fun")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("has no image"));
}

#[test]
fn coloring_reports_the_corner() {
    let o = run(&["coloring", &fixture("corner.col")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generalized_corner=true"));
}
