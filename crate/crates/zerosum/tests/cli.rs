use std::process::Command;

use zerosum::cert::{Certificate, Entry, Value};
use zerosum::cli::{EXIT_BUDGET, EXIT_COUNTEREXAMPLE, EXIT_OK, EXIT_USAGE};
use zerosum::{run_command, Outcome};

fn run(args: &[&str]) -> Outcome {
    run_command(std::iter::once("zerosum").chain(args.iter().copied()))
}

fn report(args: &[&str]) -> Certificate {
    let out = run(args);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    Certificate::from_json(&out.stdout).unwrap()
}

fn value(c: &Certificate, name: &str) -> Value {
    c.claims.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no {name}")).value.clone()
}

fn verify(c: &Certificate) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    std::fs::write(&path, c.to_json()).unwrap();
    run(&["verify-cert", path.to_str().unwrap()])
}

#[test]
fn gamma_both_on_2_4() {
    let c = report(&["gamma", "--group", "2,4", "--delta", "1", "--method", "both"]);
    assert_eq!(value(&c, "gamma_exact"), Value::Integer(1));
    assert_eq!(value(&c, "gamma_lower"), Value::Integer(1));
    assert_eq!(value(&c, "gamma_upper"), Value::Integer(1));
    let exact = c.claims.iter().find(|x| x.name == "gamma_exact").unwrap();
    assert_eq!(exact.method, zerosum::cert::Method::Both);
    assert!(exact.witness.is_some());
}

#[test]
fn invariants_both_on_3_3() {
    let c = report(&["invariants", "--group", "3,3", "--method", "both"]);
    assert_eq!(value(&c, "d"), Value::Integer(4));
    assert_eq!(value(&c, "k"), Value::Rational { num: 4, den: 3 });
}

#[test]
fn gamma_search_on_4_4_reports_bounds_and_attainment() {
    let c = report(&["gamma", "--group", "4,4", "--delta", "0", "--method", "search"]);
    assert_eq!(value(&c, "gamma_lower"), Value::Integer(5));
    assert_eq!(value(&c, "gamma_upper"), Value::Integer(6));
    let Value::Integer(exact) = value(&c, "gamma_exact") else { panic!() };
    assert!((5..=6).contains(&exact));
    assert_eq!(value(&c, "upper_bound_attained"), Value::Bool(exact == 6));
}

#[test]
fn non_p_groups_fall_back_to_search() {
    let c = report(&["invariants", "--group", "C2xC6", "--method", "formula"]);
    assert_eq!(c.group.invariant_factors, vec![2, 6]);
    assert!(c.claims.iter().all(|x| x.name != "k"));
    assert!(!c.notes.is_empty());
    let c = report(&["invariants", "--group", "2,6", "--method", "both"]);
    assert_eq!(value(&c, "d"), Value::Integer(6));
    let c = report(&["dpair", "--group", "2,6", "--dprime", "6", "--d", "6", "--method", "both"]);
    assert_eq!(value(&c, "D_pair"), Value::Integer(7));
}

#[test]
fn usage_errors() {
    for args in [
        &["invariants", "--group", "1"][..],
        &["invariants", "--group", "2,,4"],
        &["invariants"],
        &["frobnicate", "--group", "2"],
        &["gamma", "--group", "6"],
        &["gamma", "--group", "2,4", "--delta", "4"],
        &["dpair", "--group", "2,4", "--dprime", "2"],
        &["dpair", "--group", "2,4", "--dprime", "3", "--d", "4"],
        &["check", "--group", "2,4", "--name", "nonsense"],
        &["enumerate", "--group", "2,4", "--list"],
    ] {
        let out = run(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = run(&["invariants", "--group", "C2xD4"]);
    assert!(out.stderr.contains("position 3"), "{}", out.stderr);
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&["invariants", "--group", "4,4", "--method", "search", "--budget-nodes", "10"]);
    assert_eq!(out.code, EXIT_BUDGET);
    let c = Certificate::from_json(&out.stdout).unwrap();
    assert_eq!(c.status, zerosum::Status::BudgetExceeded);
    let out = run(&["check", "--group", "4,4", "--name", "olson", "--budget-nodes", "10"]);
    assert_eq!(out.code, EXIT_BUDGET);
}

#[test]
fn counterexamples_exit_1_and_still_certify() {
    let out = run(&["check", "--group", "2,6", "--name", "order-divisibility", "--threshold", "1"]);
    assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
    let c = Certificate::from_json(&out.stdout).unwrap();
    assert_eq!(c.status, zerosum::Status::Counterexample);
    let claim = &c.claims[0];
    assert_eq!(claim.value, Value::Text("counterexample".into()));
    assert_eq!(claim.extra["proven"], Value::Bool(false));
    assert!(claim.witness.is_some());
    assert_eq!(verify(&c).code, EXIT_OK);
}

#[test]
fn certificates_round_trip_through_verification() {
    for args in [
        &["gamma", "--group", "2,4", "--delta", "1"][..],
        &["invariants", "--group", "2,2,4"],
        &["dpair", "--group", "4,4"],
        &["construct", "--group", "2,4", "--kind", "dstar"],
        &["construct", "--group", "6", "--kind", "kstar"],
        &["construct", "--group", "2,8", "--kind", "gamma"],
        &["enumerate", "--group", "3,3", "--length", "3", "--list"],
        &["enumerate", "--group", "2,4"],
        &["check", "--group", "2,4"],
        &["check", "--group", "6"],
    ] {
        let c = report(args);
        let out = verify(&c);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stdout);
        assert!(out.stdout.contains("\"accepted\""));
    }
}

#[test]
fn zero_in_the_witness_is_rejected() {
    let mut c = report(&["gamma", "--group", "2,4", "--delta", "1", "--method", "both"]);
    let exact = c.claims.iter_mut().find(|x| x.name == "gamma_exact").unwrap();
    exact.witness.as_mut().unwrap()[0] = Entry {
        coords: vec![0, 0],
        multiplicity: 1,
    };
    let out = verify(&c);
    assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
    assert!(out.stdout.contains("rejected"));
    assert!(out.stdout.contains("forbidden subsum"), "{}", out.stdout);
}

#[test]
fn claimed_minimum_must_match_the_witness() {
    let mut c = report(&["gamma", "--group", "2,4", "--delta", "1", "--method", "both"]);
    let exact = c.claims.iter_mut().find(|x| x.name == "gamma_exact").unwrap();
    exact.value = Value::Integer(0);
    assert_eq!(verify(&c).code, EXIT_COUNTEREXAMPLE);

    // a valid witness with two maximal-order elements claiming Γ_1 = 2
    let mut c = report(&["gamma", "--group", "2,4", "--delta", "1", "--method", "search"]);
    c.claims.retain(|x| x.name == "gamma_exact");
    let exact = &mut c.claims[0];
    exact.value = Value::Integer(2);
    exact.witness = Some(vec![
        Entry { coords: vec![1, 0], multiplicity: 1 },
        Entry { coords: vec![0, 1], multiplicity: 2 },
    ]);
    let out = verify(&c);
    assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
    assert!(out.stdout.contains("recomputed 1"), "{}", out.stdout);
}

#[test]
fn tampered_status_and_group_are_rejected() {
    let mut c = report(&["check", "--group", "2,4", "--name", "olson"]);
    c.claims[0].value = Value::Text("counterexample".into());
    assert_eq!(verify(&c).code, EXIT_COUNTEREXAMPLE);

    let mut c = report(&["invariants", "--group", "2,4"]);
    c.group.spec = "2,8".into();
    assert_eq!(verify(&c).code, EXIT_COUNTEREXAMPLE);

    let mut c = report(&["invariants", "--group", "2,4"]);
    c.claims.push(zerosum::Claim::new("olson", "counterexample", zerosum::cert::Method::Check));
    assert_eq!(verify(&c).code, EXIT_COUNTEREXAMPLE);
}

#[test]
fn malformed_certificates_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    for text in ["not json", "{}", r#"{"schema_version": 99}"#] {
        std::fs::write(&path, text).unwrap();
        assert_eq!(run(&["verify-cert", path.to_str().unwrap()]).code, EXIT_USAGE, "{text}");
    }
    let mut c = report(&["invariants", "--group", "2,4"]);
    c.schema_version = 2;
    assert_eq!(verify(&c).code, EXIT_USAGE);
    assert_eq!(run(&["verify-cert", "/nonexistent/cert.json"]).code, EXIT_USAGE);
}

#[test]
fn out_file_adds_timing_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    let out = run(&["gamma", "--group", "2,8", "--out", path.to_str().unwrap(), "--parallel", "2"]);
    assert_eq!(out.code, EXIT_OK);
    let printed = Certificate::from_json(&out.stdout).unwrap();
    let mut written = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let timing = written.timing.take().unwrap();
    assert_eq!(timing.parallel, 2);
    assert!(timing.elapsed_seconds >= 0.0);
    assert_eq!(printed, written);
    assert_eq!(run(&["verify-cert", path.to_str().unwrap()]).code, EXIT_OK);
}

#[test]
fn text_format_mirrors_the_claims() {
    let out = run(&["invariants", "--group", "3,3", "--format", "text"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("invariants C3⊕C3 [3,3]  status: ok\n"));
    let k = out.stdout.lines().find(|l| l.starts_with("k ")).unwrap();
    assert!(k.contains("4/3") && k.contains("both"), "{k}");
}

#[test]
fn json_is_stable_across_thread_counts() {
    for args in [&["gamma", "--group", "2,2,4"][..], &["check", "--group", "4,4"], &["dpair", "--group", "2,6"]] {
        let one = run(args);
        let mut wide = args.to_vec();
        wide.extend(["--parallel", "8"]);
        assert_eq!(one.stdout, run(&wide).stdout, "{args:?}");
    }
}

#[test]
fn binary_exit_codes_and_budget_override() {
    let bin = env!("CARGO_BIN_EXE_zerosum");
    let status = Command::new(bin).args(["invariants", "--group", "2,4"]).output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_OK));
    let status = Command::new(bin).args(["invariants", "--group", "1"]).output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["invariants", "--group", "4,4", "--method", "search"])
        .env("ZEROSUM_BUDGET_NODES", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    let c = Certificate::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(c.parameters.budget_nodes, 5);
}
