use assert_cmd::Command;

fn ratectl() -> Command {
    Command::cargo_bin("ratectl").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = ratectl().args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn table_reproduces_bundled_suite() {
    let text = stdout(&["table"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    assert_eq!(lines[0], "row,baseline,esc_ii,esc_iii,esc_iv,esc_v");
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn tight_tolerance_fails_with_cell_list() {
    let out = ratectl().args(["table", "--tol", "1e-9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.lines().count() > 1 && err.contains("baseline"), "{err}");
}

#[test]
fn solve_json_reports_trade_deficit() {
    let text = stdout(&["solve", "--rate", "0.4821", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let tb0 = v["tb0"].as_f64().unwrap();
    assert!(((tb0 + 14_948.74) / 14_948.74).abs() < 2e-3, "{tb0}");
    assert_eq!(v["r"].as_f64(), Some(0.4821));
}

#[test]
fn inadmissible_rate_exits_with_status_2() {
    ratectl().args(["solve", "--rate", "-2.0"]).assert().code(2).stdout("");
}

#[test]
fn bad_scenario_file_exits_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scn");
    std::fs::write(&path, "[x]\nperturb.nonsense = 1.1\nrate = 0.5\n").unwrap();
    ratectl().args(["table", "--scenario-file", path.to_str().unwrap()]).assert().code(2);
}

#[test]
fn instance_file_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("baseline.inst");
    std::fs::write(&path, ratectl::config::write_instance(&ratectl::ModelInstance::baseline())).unwrap();
    let from_file = stdout(&["--instance-file", path.to_str().unwrap(), "solve", "--rate", "0.4821", "--format", "json"]);
    let embedded = stdout(&["solve", "--rate", "0.4821", "--format", "json"]);
    assert_eq!(from_file, embedded);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [&["table", "--format", "json"][..], &["sweep"], &["schedules", "--mode", "partial"]] {
        assert_eq!(stdout(args), stdout(args));
    }
}

#[test]
fn schedules_csv_layout() {
    let text = stdout(&["schedules", "--grid", "0.3,0.7,5"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,I0,S0N,S1X,residual");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0.3,"));
}

#[test]
fn balanced_trade_sweep() {
    let text = stdout(&["sweep", "--closure", "balanced-trade", "--bracket", "0.4821,1.2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["closure"]["rate"].as_f64().unwrap() - 0.748304).abs() < 1e-5);
    assert!(v["equilibrium"]["tb0"].as_f64().unwrap().abs() < 1e-3);
}
