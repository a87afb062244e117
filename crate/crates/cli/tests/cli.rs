use std::process::{Command, Output};

fn cobit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobit"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn same_seed_same_bytes() {
    for args in [
        &["protocol", "run", "coherent-teleport", "--seed", "11"][..],
        &["protocol", "run", "entanglement-concentration", "--seed", "3"],
        &["rsp", "run", "--d", "2", "--seed", "5"],
        &["capacity", "--gate", "cnot", "--e", "0.5", "--restarts", "2", "--seed", "1"],
    ] {
        let a = cobit(args);
        let b = cobit(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn different_seeds_differ_for_haar_inputs() {
    let a = cobit(&["protocol", "run", "coherent-sdc", "--seed", "1"]);
    let b = cobit(&["protocol", "run", "coherent-sdc", "--seed", "2"]);
    assert_eq!(json(&a)["seed"], 1);
    assert_eq!(json(&b)["seed"], 2);
}

#[test]
fn every_listed_protocol_runs() {
    let list = json(&cobit(&["protocol", "list"]));
    let names: Vec<String> = list.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap().to_string()).collect();
    assert!(names.len() >= 10);
    for name in names {
        let out = cobit(&["protocol", "run", &name]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let t = json(&out);
        assert!(t["protocol"].as_str().is_some());
        assert_eq!(t["status"], "ok", "{name}");
    }
}

#[test]
fn prove_exit_codes() {
    let found = cobit(&["prove", "qubit-> + ebit", ">=", "2 cobit->"]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(json(&found)["verdict"], "found");

    let missing = cobit(&["prove", "cbit->", ">=", "qubit->"]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(json(&missing)["verdict"], "not-found");

    let bad = cobit(&["prove", "three qubits", ">=", "qubit->"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());

    let bad_relation = cobit(&["prove", "qubit->", "<=", "cobit->"]);
    assert_eq!(bad_relation.status.code(), Some(2));
}

#[test]
fn equality_with_catalyst() {
    let out = cobit(&["prove", "2 cobit->", "==", "qubit-> + ebit", "--cat", "ebit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "equal");
    assert!(!v["forward"]["steps"].as_array().unwrap().is_empty());
    assert!(!v["backward"]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cobit(&["protocol", "run", "no-such-protocol"]).status.code(), Some(2));
    assert_eq!(cobit(&["protocol", "run", "coherent-sdc", "--input", "012"]).status.code(), Some(2));
    assert_eq!(cobit(&["capacity", "--gate", "toffoli"]).status.code(), Some(2));
    assert_eq!(cobit(&["rsp", "run", "--d", "2", "--cover", "pauli", "--n", "8"]).status.code(), Some(2));
    assert_eq!(cobit(&["--tol", "nonsense=1", "selftest"]).status.code(), Some(2));
    assert_eq!(cobit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn capacity_reports_witnesses() {
    let out = cobit(&["capacity", "--gate", "cnot", "--e", "0", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(v["status"], "converged");
    let checks = v["witness_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn gate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swap.json");
    let one = [1.0, 0.0];
    let zero = [0.0, 0.0];
    let m = serde_json::json!({
        "dims": [2, 2],
        "matrix": [[one, zero, zero, zero], [zero, zero, one, zero], [zero, one, zero, zero], [zero, zero, zero, one]],
    });
    std::fs::write(&path, m.to_string()).unwrap();
    let out = cobit(&["capacity", "--gate", path.to_str().unwrap(), "--e", "0", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let named = cobit(&["capacity", "--gate", "swap", "--e", "0", "--restarts", "2"]);
    assert_eq!(json(&out)["value"], json(&named)["value"]);
}

#[test]
fn rsp_cover_round_trips() {
    let out = cobit(&["rsp", "cover", "--d", "2", "--n", "16", "--test-states", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 16);
    assert_eq!(v["unitaries"].as_array().unwrap().len(), 16);
    assert!(v["epsilon"].as_f64().unwrap() > 0.0);
}

#[test]
fn selftest_passes() {
    let out = cobit(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rows = json(&out);
    assert!(rows.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn pretty_output_respects_no_color() {
    let plain = cobit(&["selftest", "--pretty"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains('\u{1b}'));
    let coloured = Command::new(env!("CARGO_BIN_EXE_cobit"))
        .args(["selftest", "--pretty"])
        .env_remove("NO_COLOR")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&coloured.stdout).contains('\u{1b}'));
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let dest = dir.path().join("out.json");
    std::fs::write(&cfg, format!("seed = 9\noutput = {}\ntol.fidelity = 1e-8\n", dest.display())).unwrap();
    let out = cobit(&["protocol", "run", "coherent-sdc", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["seed"], 9);

    // Flags win over the file.
    let out = cobit(&["protocol", "run", "coherent-sdc", "--config", cfg.to_str().unwrap(), "--seed", "4", "--output", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["seed"], 4);

    std::fs::write(&cfg, "colour = loud\n").unwrap();
    assert_eq!(cobit(&["selftest", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn concavity_grid() {
    let out = cobit(&["capacity", "--gate", "cnot", "--grid", "0,0.5,1", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
}
