use std::fs;
use std::process::{Command, Output};

fn patchable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patchable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn mst_emits_one_row_per_trial() {
    let o = patchable(&["mst", "--n", "30", "--q", "1", "--trials", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.starts_with("trial,n,q,seed,value\n"));
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.ends_with('\n') && !csv.ends_with("\n\n"));
    assert_eq!(column(&csv, "n"), vec!["30"; 5]);
}

#[test]
fn runs_are_reproducible() {
    let args = ["assignment", "--n", "12", "--trials", "4", "--seed", "3"];
    assert_eq!(patchable(&args).stdout, patchable(&args).stdout);
    let other = patchable(&["assignment", "--n", "12", "--trials", "4", "--seed", "4"]);
    assert_ne!(patchable(&args).stdout, other.stdout);
}

#[test]
fn negative_q_is_a_usage_error_naming_the_flag() {
    let o = patchable(&["mst", "--q", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--q"));
    assert_eq!(patchable(&["mst", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(patchable(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn ab_min_from_the_command_line() {
    let o = patchable(&["bounds", "--op", "ab-min", "--a", "4", "--b", "1", "--p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let s0: f64 = column(&csv, "s0")[0].parse().unwrap();
    let fmin: f64 = column(&csv, "fmin")[0].parse().unwrap();
    assert!((s0 - 1.0 / 3.0).abs() < 1e-15);
    assert!((fmin - 9.0).abs() < 1e-14);
    let missing = patchable(&["bounds", "--op", "ab-min", "--a", "4"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("--b"));
}

#[test]
fn other_bound_ops() {
    let value = |args: &[&str], col: &str| -> f64 {
        let o = patchable(args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        column(&stdout(&o), col)[0].parse().unwrap()
    };
    assert_eq!(value(&["bounds", "--op", "upper-tail", "--t", "2"], "probability"), 0.5);
    assert!((value(&["bounds", "--op", "ball-volume", "--m", "3", "--L", "1"], "probability") - 1.0 / 6.0).abs() < 1e-14);
    assert!((value(&["bounds", "--op", "r-min", "--ell", "199", "--eps", "0.05"], "r_min") - 69.0594365709564).abs() < 1e-10);
    assert!((value(&["bounds", "--op", "mean-median"], "c_q") - 2.0 / 2f64.ln()).abs() < 1e-12);
    let fm = &["bounds", "--op", "first-moment", "--ell0", "16", "--ell1", "64", "--beta", "0.5", "--c", "1", "--t", "1"];
    assert!(value(fm, "markov_sum") < (-16f64).exp());
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nn = 10\ntrials = 3\nseed = 11\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = patchable(&["mst", "--config", cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(column(&stdout(&o), "n"), vec!["10"; 3]);
    assert_eq!(column(&stdout(&o), "seed"), vec!["11"; 3]);

    let o = patchable(&["mst", "--n", "14", "--config", cfg]);
    assert_eq!(column(&stdout(&o), "n"), vec!["14"; 3]);
    let o = patchable(&["mst", &format!("--config={cfg}"), "--trials", "2"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn bad_config_files_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    for (name, text) in [
        ("unknown.cfg", "n = 10\ncolour = blue\n"),
        ("value.cfg", "q = -2\n"),
        ("syntax.cfg", "n 10\n"),
        ("nested.cfg", "config = other.cfg\n"),
        ("duplicate.cfg", "n = 1\nn = 2\n"),
    ] {
        let path = write(name, text);
        let o = patchable(&["mst", "--config", &path]);
        assert_eq!(o.status.code(), Some(3), "{name}: {}", stderr(&o));
    }
    // A key valid for another subcommand is still unknown here.
    let path = write("foreign.cfg", "g-strategy = adversarial-heaviest\n");
    assert_eq!(patchable(&["mst", "--config", &path]).status.code(), Some(3));
    assert_eq!(patchable(&["patch", "--config", &path, "--n", "9", "--trials", "2"]).status.code(), Some(0));
    let missing = dir.path().join("absent.cfg");
    assert_eq!(patchable(&["mst", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn output_files_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("records.json");
    let o = patchable(&["split", "--n", "15", "--r", "3", "--trials", "4", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.ends_with("]\n"));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 4);
    for key in ["trial", "n", "q", "seed", "value", "w_green", "w_red", "bound", "violation"] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }

    let bad = dir.path().join("missing-dir").join("x.csv");
    let o = patchable(&["mst", "--n", "5", "--trials", "1", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn json_mirrors_csv() {
    let base = ["patch", "--n", "16", "--r", "4", "--trials", "3"];
    let csv = stdout(&patchable(&base));
    let json_args: Vec<&str> = base.iter().copied().chain(["--format", "json"]).collect();
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&patchable(&json_args))).unwrap();
    for name in ["value", "rho", "heuristic_cost"] {
        let from_csv: Vec<f64> = column(&csv, name).iter().map(|v| v.parse().unwrap()).collect();
        let from_json: Vec<f64> = rows.iter().map(|r| r[name].as_f64().unwrap()).collect();
        assert_eq!(from_csv, from_json, "{name}");
    }
}

#[test]
fn verification_subcommands_pass() {
    for args in [
        vec!["oracle", "--family", "tree", "--n", "5", "--trials", "20"],
        vec!["oracle", "--family", "matching", "--n", "5", "--trials", "20"],
        vec!["coupling", "--q", "2", "--base", "exponential", "--s", "0.1", "--trials", "50000"],
        vec!["tail", "--n", "20", "--trials", "400"],
        vec!["split", "--n", "30", "--s", "0.3", "--trials", "10"],
        vec!["dual", "--n", "20", "--L", "1.0", "--trials", "200", "--t-grid", "1,2"],
    ] {
        let o = patchable(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
    let o = patchable(&["oracle", "--n", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_limit_check_exits_1() {
    // Five trials cannot put the mean within 0.01% of the limit.
    let o = patchable(&["mst", "--n", "10", "--trials", "5", "--tolerance", "0.0001"]);
    assert_eq!(o.status.code(), Some(1));
    let o = patchable(&["mst", "--n", "10", "--trials", "5", "--q", "2", "--tolerance", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}
