use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_star53k")).args(args).env_remove("STAR53K_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_examples() {
    let o = run(&["classify", "--k", "6", "--prime", "-1+2t"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("O(4,5,-1), order 31200"), "{}", stdout(&o));

    let o = run(&["classify", "--k", "3", "--prime", "-1+2t", "--scale", "2"]);
    assert!(stdout(&o).contains("O2(4,5,-1)"));

    let o = run(&["classify", "--k", "5", "--prime", "-1+2t"]);
    assert!(stdout(&o).contains("Exceptional C5^3:(C2xA5), order 15000"));
}

#[test]
fn classify_json_has_symbols() {
    let o = run(&["classify", "--k", "all", "--prime", "3+1t", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["classification"], "O1(4,11,-1)");
    assert_eq!(rows[3]["predictedOrder"], 1_771_440);
    assert_eq!(rows[0]["class"], "III");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--k", "3", "--prime", "3+t"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--k", "8", "--prime", "3"]).status.code(), Some(2));
    assert_eq!(run(&["polytope", "--k", "3", "--prime", "2", "--ring", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--k", "3", "--prime", "4+2t"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--k", "3", "--prime", "11"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--k", "3", "--prime", "1+1t"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--k", "3", "--prime", "3", "--cap", "50"]).status.code(), Some(4));
}

#[test]
fn cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_star53k"))
        .args(["verify", "--k", "3", "--prime", "3"])
        .env("STAR53K_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_k6_at_three() {
    let o = run(&["verify", "--k", "6", "--prime", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with("G_") && !l.contains('|')).collect();
    assert_eq!(checks.len(), 6, "{text}");
    assert!(checks.iter().all(|l| l.ends_with(": true")), "{text}");
    assert!(text.contains("C-group: true"));
}

#[test]
fn polytope_json() {
    let o = run(&["polytope", "--k", "3", "--prime", "2", "--ring", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let counts: Vec<u64> =
        ["vertices", "edges", "subfacets", "cellsP", "cellsQ"].iter().map(|k| v[k].as_u64().unwrap()).collect();
    assert_eq!(counts, [16, 120, 160, 16, 40]);
    assert_eq!(v["ring"], 2);
    assert_eq!(v["orbitClass"], "TwoOrbit");
    assert!(v["orbitClassBasis"].as_str().unwrap().contains("surrogate"));
}

#[test]
fn survey_is_byte_stable() {
    let dir = std::env::temp_dir().join(format!("star53k-survey-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.jsonl");
    let b = dir.join("b.jsonl");
    for path in [&a, &b] {
        let o = run(&["survey", "--k", "all", "--max-norm", "19", "--cap", "200000", "--out", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"], true);
    assert_eq!(last["dualPathDisagreements"], 0);
    assert_eq!(last["cgroupFailures"], 0);
    assert_eq!(last["orderMismatches"], 0);
    assert_eq!(last["rows"], text.lines().count() as u64 - 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
