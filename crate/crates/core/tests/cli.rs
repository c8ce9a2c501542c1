use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parahoric-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let start = text.find("\n{").map(|i| i + 1).expect("json on stdout");
    serde_json::from_str(&text[start..]).unwrap()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(lab(&["char-table", "--n", "2", "--q", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(lab(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn bad_values_exit_two() {
    assert_eq!(lab(&["char-table", "--n", "2", "--q", "6"]).status.code(), Some(2));
    let out = lab(&["lemma-verify", "--q", "2", "--f", "1", "--e0", "2", "--shape", "3", "--x", "d:0,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lab(&["lemma-sweep", "--q", "2", "--f", "1", "--e0", "2", "--sample", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn worked_cell_passes() {
    let out = lab(&["lemma-verify", "--q", "2", "--f", "1", "--e0", "2", "--shape", "2", "--tau", "trivial", "--x", "d:0,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cell = &v["cells"][0];
    assert_eq!(cell["left"], 1);
    assert_eq!(cell["right"], 1);
    assert_eq!(cell["equal"], true);
    assert!(cell["wall_ms"].is_null());
}

#[test]
fn char_table_degrees() {
    let out = lab(&["char-table", "--n", "2", "--q", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cells"][0]["params"]["degrees"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["summary"]["failures"], 0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        let args = ["lemma-sweep", "--q", "2", "--f", "1", "--e0", "2,3", "--sample", "0.5", "--seed", "11", "--output"];
        let out = lab(&[&args[..], &[p.to_str().unwrap()]].concat());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["config"]["seed"], 11);
    for key in ["params", "left", "right", "equal", "wall_ms"] {
        assert!(v["cells"][0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn config_file_drives_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let report = dir.path().join("out.json");
    std::fs::write(&cfg, format!("# small grid\nq = 2\nf = 1\ne0 = 2\nbound = 1\noutput = {}\n", report.display())).unwrap();
    let out = lab(&["lemma-sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["bound"], 1);
    assert!(v["summary"]["cells"].as_u64().unwrap() > 0);
    let missing = lab(&["lemma-sweep", "--config", "/nonexistent/sweep.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn group_bound_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_parahoric-lab"))
        .args(["char-table", "--n", "2", "--q", "3"])
        .env("PARAHORIC_LAB_MAX_GROUP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn building_and_complex_commands() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("ball.json");
    let out = lab(&["building", "--rank", "2", "--q", "2", "--radius", "1", "--export", export.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&export).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(lab(&["complex-check", "--rank", "2", "--q", "3", "--radius", "1"]).status.code(), Some(0));
}

#[test]
fn orbit_check_rejects_wrong_support() {
    assert_eq!(lab(&["orbit-check", "--q", "2", "--e0", "2", "--shape", "1,1", "--tau", "0,0"]).status.code(), Some(0));
    assert_eq!(lab(&["orbit-check", "--q", "2", "--e0", "2", "--shape", "2", "--tau", "0"]).status.code(), Some(2));
}
