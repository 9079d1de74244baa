use borel_workbench::clireport::{run_command, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let argv = std::iter::once("borel-workbench").chain(args.iter().copied());
    let out = run_command(argv, None);
    let json = if out.stdout.is_empty() { Value::Null } else { serde_json::from_slice(&out.stdout).expect("json") };
    (out.code, json, out.stderr)
}

fn names(doc: &Value) -> Vec<String> {
    doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect()
}

#[test]
fn identities_example() {
    let (code, doc, _) = run(&["identities", "--p", "5", "--trials", "200", "--seed", "42"]);
    assert_eq!(code, EXIT_PASS);
    let names = names(&doc);
    for n in ["trix-identity", "restP-conjugation", "bruhat-roundtrip"] {
        assert!(names.iter().any(|x| x == n), "{n} missing from {names:?}");
    }
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["wall_clock"], Value::Null);
}

#[test]
fn recursion_example_reports_n_one() {
    let (code, doc, _) = run(&["recursion", "--p", "3", "--weight", "1,0", "--ideal", "T", "--bound", "10"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(doc["checks"][0]["details"]["n"], 1);
    assert_eq!(doc["checks"][0]["certification"]["radius"], 3);
}

#[test]
fn invalid_configurations_exit_64_with_usage() {
    for args in [
        &["hecke", "--p", "7", "--weight", "9,0"][..],
        &["hecke", "--p", "4"],
        &["hecke", "--p", "17"],
        &["weights", "--p", "5", "--weight", "1,4"],
        &["pseries", "--p", "3", "--char", "0,0,0,1"],
        &["pseries", "--p", "3", "--char", "2,0,1,1"],
        &["recursion", "--ideal", "X+1"],
        &["hom-transfer", "--case", "nope"],
        &["frobnicate"],
        &["identities", "--trials", "many"],
    ] {
        let out = run_command(std::iter::once("borel-workbench").chain(args.iter().copied()), None);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(out.stderr.contains("Usage"), "{args:?}: {}", out.stderr);
    }
    assert_eq!(run_command(["borel-workbench", "--version"], None).code, EXIT_PASS);
}

#[test]
fn identical_runs_are_byte_identical() {
    let argv = ["borel-workbench", "hecke", "--p", "3", "--trials", "7", "--seed", "5"];
    let a = run_command(argv, None);
    assert_eq!(a, run_command(argv, None));
    let from_env = run_command(["borel-workbench", "hecke", "--p", "3", "--trials", "7"], Some("5"));
    assert_eq!(a, from_env);
    let other = run_command(["borel-workbench", "hecke", "--p", "3", "--trials", "7", "--seed", "6"], None);
    assert_ne!(a.stdout, other.stdout);
    assert!(run_command(["borel-workbench", "identities"], Some("x")).code == EXIT_USAGE);
}

#[test]
fn json_keys_are_sorted_and_newline_terminated() {
    let out = run_command(["borel-workbench", "weights", "--p", "2"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("}\n"));
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert_eq!(top, ["checks", "command", "config", "schema_version", "seed", "wall_clock"]);
}

#[test]
fn text_format_has_one_line_per_check() {
    let out = run_command(["borel-workbench", "identities", "--p", "2", "--format", "text"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5 + 2);
    assert!(lines[1..6].iter().all(|l| l.starts_with("PASS")));
}

#[test]
fn config_file_is_read_and_overridden() {
    let dir = std::env::temp_dir().join(format!("workbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"p": 2, "weight": [1, 0], "ideal": "T^2", "bound": 5}"#).unwrap();
    let path = good.to_str().unwrap();
    let (code, doc, _) = run(&["recursion", "--config", path]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(doc["config"]["p"], 2);
    assert_eq!(doc["checks"][0]["details"]["n"], 2);
    let (_, doc, _) = run(&["recursion", "--config", path, "--ideal", "T"]);
    assert_eq!(doc["checks"][0]["details"]["n"], 1);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"p": 2, "colour": "blue"}"#).unwrap();
    let (code, _, err) = run(&["recursion", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("colour"));
    let (code, _, _) = run(&["recursion", "--config", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn non_terminating_recursion_is_inconclusive() {
    let (code, doc, _) = run(&["recursion", "--p", "3", "--weight", "1,0", "--ideal", "T-1", "--bound", "3"]);
    assert_eq!(doc["checks"][0]["status"], "inconclusive");
    assert_eq!(code, 3);
}

#[test]
fn large_primes_skip_the_heavy_suites() {
    let (code, doc, _) = run(&["hom-transfer", "--p", "5"]);
    assert_eq!(code, 3);
    assert_eq!(doc["checks"][0]["status"], "inconclusive");
}
