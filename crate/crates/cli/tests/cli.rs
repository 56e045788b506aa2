use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_manning-rosen"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok(&full)).unwrap()
}

const TABLE_2P: &[&str] = &["--inv-b", "0.025", "--A-over-b", "2", "--alpha", "0.75", "--dim", "2"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn spectrum_reproduces_reference_cells() {
    let text = ok(&with(&["spectrum"], &with(TABLE_2P, &["--states", "2p"])));
    assert!(text.contains("-0.241087728"), "{text}");
    let v = json(&["spectrum", "--inv-b", "0.1", "--A-over-b", "2", "--alpha", "1.5", "--dim", "4", "--states", "3p"]);
    let e = v["rows"][0]["energy"].as_f64().unwrap();
    assert!((e + 0.004801908).abs() < 5e-10);
    assert_eq!(v["rows"][0]["status"], "bound");
}

#[test]
fn malformed_label_is_a_usage_error() {
    let out = run(&["spectrum", "--alpha", "0.75", "--dim", "2", "--states", "1x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1x"));
}

#[test]
fn missing_parameters_and_bad_flags_are_usage_errors() {
    assert_eq!(run(&["spectrum", "--alpha", "0.75", "--states", "2p"]).status.code(), Some(2));
    assert_eq!(run(&with(&["spectrum", "--precision", "18"], TABLE_2P)).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--A", "1", "--A-over-b", "2", "--b", "1", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn spectrum_lists_unbound_and_all_bound_states() {
    let v = json(&with(&["spectrum"], &with(TABLE_2P, &["--states", "2p,40p"])));
    assert_eq!(v["rows"][1]["status"], "unbound");
    assert_eq!(v["rows"][1]["energy"], Value::Null);
    let v = json(&["spectrum", "--inv-b", "0.1", "--A-over-b", "2", "--alpha", "0.75", "--dim", "2", "--l", "1"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["status"] == "bound"));
    assert!(rows.iter().enumerate().all(|(i, r)| r["n"] == i as u64));
    // nothing bound: empty table, exit 0
    let out = run(&["spectrum", "--A", "0.1", "--b", "1", "--alpha", "0.75", "--dim", "4", "--l", "1", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no bound states"));
}

#[test]
fn table_flags_suspected_errata() {
    let text = ok(&["table"]);
    assert!(text.contains("suspected_errata: 4"));
    let v = json(&["table"]);
    let cells = v.as_object().unwrap();
    assert_eq!(cells.len(), 168);
    let six_d = &cells["6d/inv_b=0.025/alpha=0.75/D=2"];
    assert_eq!(six_d["suspected_erratum"], true);
    assert!((six_d["recomputed"].as_f64().unwrap() + 0.006591).abs() < 1e-6);
    let flagged: Vec<_> = cells.iter().filter(|(_, c)| c["suspected_erratum"] == true).map(|(k, _)| k.as_str()).collect();
    assert_eq!(
        flagged,
        vec![
            "5p/inv_b=0.025/alpha=0,1/D=4",
            "5p/inv_b=0.025/alpha=0.75/D=4",
            "5p/inv_b=0.025/alpha=1.5/D=4",
            "6d/inv_b=0.025/alpha=0.75/D=2"
        ]
    );
    let csv = ok(&["table", "--format", "csv"]);
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 169);
}

#[test]
fn wavefunction_file_has_norm_and_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("2p.csv");
    let p = path.to_str().unwrap();
    ok(&with(&["wavefunction"], &with(TABLE_2P, &["--states", "2p", "--samples", "1000", "--format", "csv", "--out", p])));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1001);
    assert!(text.contains("# node_count = 0\n"));
    let norm: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# norm = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 1.0).abs() < 1e-8);

    let v = json(&with(&["wavefunction"], &with(TABLE_2P, &["--states", "4d", "--samples", "50"])));
    assert_eq!(v["node_count"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 50);
}

#[test]
fn wavefunction_errors() {
    let zero = run(&with(&["wavefunction"], &with(TABLE_2P, &["--states", "2p", "--samples", "0"])));
    assert_eq!(zero.status.code(), Some(2));
    let unbound = run(&["wavefunction", "--inv-b", "0.1", "--A-over-b", "2", "--alpha", "0.75", "--dim", "2", "--states", "9p"]);
    assert_eq!(unbound.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&unbound.stderr).contains("epsilon"));
    let two = run(&with(&["wavefunction"], &with(TABLE_2P, &["--states", "2p,3p"])));
    assert_eq!(two.status.code(), Some(2));
}

#[test]
fn oracle_identity_and_s_wave() {
    let v = json(&with(&["oracle"], &with(TABLE_2P, &["--states", "2p", "--mode", "approx"])));
    assert!(v["rows"][0]["rel_err_approx"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["rows"][0]["e_exact"], Value::Null);
    let v = json(&["oracle", "--mode", "both", "--dim", "3", "--states", "1s", "--alpha", "0", "--A", "3", "--b", "10"]);
    assert_eq!(v["rows"][0]["e_exact"], v["rows"][0]["e_approx"]);
    assert!((v["rows"][0]["e_exact"].as_f64().unwrap() + 0.005).abs() < 0.005 * 1e-7);
}

#[test]
fn oracle_sweep_is_monotone() {
    let v = json(&[
        "oracle", "--inv-b", "0.1,0.075,0.05,0.025", "--A-over-b", "2", "--alpha", "0.75", "--dim", "2", "--states",
        "2p", "--mode", "exact",
    ]);
    let errs: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["rel_err_exact"].as_f64().unwrap()).collect();
    assert_eq!(errs.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn oracle_solver_failure_exit_code() {
    let out = run(&with(&["oracle"], &with(TABLE_2P, &["--states", "3p", "--points", "5", "--no-extrapolate"])));
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn degeneracy_chains() {
    let v = json(&[
        "degeneracy", "--n", "0", "--l", "4", "--dim", "2", "--dmin", "2", "--dmax", "8", "--A-over-b", "2", "--inv-b",
        "0.025", "--alpha", "0.75",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["energy"] == rows[0]["energy"]));
    assert_eq!(v["max_energy_spread"], 0.0);
    let v = json(&["degeneracy", "--n", "0", "--l", "0", "--dim", "2", "--dmin", "2", "--dmax", "2"]);
    assert_eq!(v["partners"], 1);
    assert_eq!(run(&["degeneracy", "--n", "0", "--l", "0", "--dim", "2", "--dmin", "6", "--dmax", "4"]).status.code(), Some(2));

    let e = |dim: &'static str, state: &'static str| {
        json(&["spectrum", "--inv-b", "0.05", "--A-over-b", "2", "--alpha", "1.5", "--dim", dim, "--states", state])["rows"][0]
            ["energy"]
            .as_f64()
            .unwrap()
    };
    let (a, b) = (e("4", "2p"), e("2", "3d"));
    assert!(((a - b) / a).abs() < 1e-12);
}

#[test]
fn critical_coupling_table() {
    let v = json(&["critical-coupling", "--alpha", "0.75", "--dim", "2", "--states", "2p"]);
    let a_c = v["rows"][0]["A_c"].as_f64().unwrap();
    let spec = json(&["spectrum", "--A", &a_c.to_string(), "--b", "3", "--alpha", "0.75", "--dim", "2", "--states", "2p"]);
    assert!(spec["rows"][0]["epsilon"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn output_is_deterministic_and_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        let p = dir.path().join(name);
        (p.clone(), vec![
            "oracle".to_string(), "--inv-b".into(), "0.05,0.025".into(), "--A-over-b".into(), "2".into(), "--alpha".into(),
            "0.75".into(), "--dim".into(), "2".into(), "--states".into(), "2p,3p,3d".into(), "--mode".into(), "both".into(),
            "--points".into(), "2001".into(), "--format".into(), "json".into(), "--out".into(), p.to_str().unwrap().into(),
        ])
    };
    let (p1, a1) = args("a.json");
    let (p2, a2) = args("b.json");
    assert!(bin().args(&a1).status().unwrap().success());
    assert!(bin().args(&a2).status().unwrap().success());
    let (b1, b2) = (fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    assert!(b1 == b2, "repeated runs differ");
    let v: Value = serde_json::from_slice(&b1).unwrap();
    let mut again = serde_json::to_vec_pretty(&v).unwrap();
    again.push(b'\n');
    assert!(again == b1, "json does not round-trip");
    let labels: Vec<_> = v["rows"].as_array().unwrap().iter().map(|r| r["state"].as_str().unwrap().to_string()).collect();
    assert_eq!(labels, ["2p", "3p", "3d", "2p", "3p", "3d"]);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# reference parameters\nA-over-b = 2\ninv-b = 0.025\nalpha = 0.75\ndim = 2\nstates = 2p\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&["spectrum", "--config", c]);
    assert!((v["rows"][0]["energy"].as_f64().unwrap() + 0.241087728).abs() < 5e-10);
    // flags override, including the alternative spelling of a parameter
    let v = json(&["--config", c, "spectrum", "--alpha", "1.5", "--b", "10", "--dim", "4", "--states", "3p"]);
    let row = &v["rows"][0];
    assert_eq!(row["D"], 4);
    assert!((row["inv_b"].as_f64().unwrap() - 0.1).abs() < 1e-15);
    assert!((row["energy"].as_f64().unwrap() + 0.004801908).abs() < 5e-10);
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "alpha 0.75\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}
