use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcluster"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn seed_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcluster-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const A2: &str = r#"{"n": 2, "unfrozen": [1, 2], "B": [[0, -1], [1, 0]], "Lambda": [[0, -1], [1, 0]], "D": [1, 1]}"#;

#[test]
fn check_accepts_a2_and_rejects_zero_lambda() {
    let a2 = seed_file("a2.json", A2);
    let o = run(&["check", a2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "compatible\n");

    let z = seed_file("zero.json", r#"{"n": 2, "unfrozen": [1, 2], "B": [[0, -1], [1, 0]], "Lambda": [[0, 0], [0, 0]], "D": [1, 1]}"#);
    let o = run(&["check", z.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("incompatible"));
}

#[test]
fn check_synthesizes_b2_lambda() {
    let b2 = seed_file("b2.json", r#"{"n": 2, "unfrozen": [1, 2], "B": [[0, -2], [1, 0]]}"#);
    let o = run(&["check", b2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let json = out.trim_start_matches("synthesized compatible pair:\n").trim_end_matches("compatible\n");
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["Lambda"], serde_json::json!([[0, -1], [1, 0]]));
    assert_eq!(v["D"], serde_json::json!([1, 2]));
}

#[test]
fn parse_errors_are_usage_errors() {
    let bad = seed_file("bad.json", r#"{"n": 2, "unfrozen": [1, 2], "B": [[0, -1], [1, 0]],"#);
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(run(&["expand", "builtin:a2", "--word", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn expand_prints_injectives() {
    let o = run(&["expand", "builtin:a2", "--word", "2,1,2", "--var", "1"]);
    assert_eq!(stdout(&o), "X[-1,-1] + X[-1,0] + X[0,-1]\n");
    let o = run(&["expand", "builtin:a2", "--word", "2,1,2", "--var", "2"]);
    assert_eq!(stdout(&o), "X[-1,0] + X[-1,1]\n");
    assert_eq!(stdout(&run(&["expand", "builtin:a2", "--var", "2"])), "X[0,1]\n");
    assert_eq!(
        stdout(&run(&["expand", "builtin:b2", "--word", "1,2,1,2,2,1,2,1"])),
        "X_1 = X[1,0]\nX_2 = X[0,1]\n"
    );
}

#[test]
fn mutate_twice_is_identity() {
    let once = stdout(&run(&["mutate", "builtin:b2", "--word", "2"]));
    assert!(once.contains("\"B\""));
    let p = seed_file("b2m.json", &once);
    let back: serde_json::Value = serde_json::from_str(&stdout(&run(&["mutate", p.to_str().unwrap(), "--word", "2"]))).unwrap();
    let orig: serde_json::Value = serde_json::from_str(&stdout(&run(&["mutate", "builtin:b2"]))).unwrap();
    assert_eq!(back, orig);
}

#[test]
fn graph_counts_and_dot() {
    assert!(stdout(&run(&["graph", "builtin:a2"])).starts_with("5 nodes\n5 cluster variables\n"));
    assert!(stdout(&run(&["graph", "builtin:b2"])).starts_with("6 nodes\n6 cluster variables\n"));
    assert!(stdout(&run(&["graph", "builtin:a3"])).starts_with("14 nodes\n9 cluster variables\n"));
    let dot = stdout(&run(&["graph", "builtin:a2", "--dot"]));
    assert!(dot.starts_with("graph exchange {\n  n1 [label=\"[0,1] [1,0]\"];"));
    assert_eq!(dot.matches(" -- ").count(), 5);
}

#[test]
fn infinite_type_is_reported() {
    let markov = seed_file(
        "markov.json",
        r#"{"n": 6, "unfrozen": [1, 2, 3], "B": [[0, 2, -2], [-2, 0, 2], [2, -2, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#,
    );
    for cmd in ["graph", "leclerc", "shift"] {
        let o = run(&[cmd, markov.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&o.stderr).contains("not finite type"));
    }
    // Kronecker quiver with principal coefficients: 2-finite test fires on the initial matrix
    let k = seed_file("kron.json", r#"{"n": 4, "unfrozen": [1, 2], "B": [[0, -2], [2, 0], [1, 0], [0, 1]]}"#);
    assert_eq!(run(&["graph", k.to_str().unwrap(), "--cap", "20"]).status.code(), Some(1));
}

#[test]
fn shift_word_and_sigma() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["shift", "builtin:a2"]))).unwrap();
    assert_eq!(v["word"], serde_json::json!([2, 1, 2]));
    assert_eq!(v["sigma"], serde_json::json!([2, 1]));
    assert_eq!(v["checks"]["swap_failures"], serde_json::json!([]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["shift", "builtin:a3"]))).unwrap();
    assert_eq!(v["word"].as_array().unwrap().len(), 6);
}

#[test]
fn leclerc_report_is_deterministic_and_has_golden_products() {
    let dir = std::env::temp_dir().join(format!("qcluster-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (r1, r2) = (dir.join("r1.json"), dir.join("r2.json"));
    let o1 = run(&["leclerc", "builtin:a2", "--cap", "2", "--json", r1.to_str().unwrap()]);
    let o2 = run(&["leclerc", "builtin:a2", "--cap", "2", "--json", r2.to_str().unwrap()]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o1.stdout, o2.stdout);
    let (a, b) = (std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["nodes"], 5);
    assert_eq!(v["basis_size"], 31);
    assert_eq!(v["summary"]["two_tail_fail"], 0);
    let products: Vec<String> = v["triangular"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|t| t.get("entries"))
        .flat_map(|e| e.as_array().unwrap().iter().map(|x| x["product"].as_str().unwrap().to_string()))
        .collect();
    // [X_i * I_k] and {P_k * X_i} at the initial seed
    for p in [
        "X[0,0] + (v^-1)*X[0,1]",
        "X[0,-1] + (v^-1)*X[0,0] + X[1,-1]",
        "X[-1,1] + X[-1,2]",
        "(v^-1)*X[-1,0] + (v^-1)*X[-1,1] + X[0,0]",
        "(v^-1)*X[0,-1] + X[0,0] + (v^-1)*X[1,-1]",
        "X[-1,0] + X[-1,1] + (v^-1)*X[0,0]",
        "X[1,-1] + X[2,-1]",
        "X[0,0] + (v^-1)*X[1,0]",
    ] {
        assert!(products.iter().any(|q| q == p), "missing {p}");
    }
    let s = stdout(&run(&["leclerc", "builtin:a2", "--cap", "1", "--scope", "conjecture"]));
    assert!(s.starts_with("conjecture mode"));
}
