use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn prophet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prophet"))
        .args(args)
        .env_remove("PROPHET_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_rows(o: &Output) -> Vec<serde_json::Value> {
    serde_json::from_slice::<Vec<serde_json::Value>>(&o.stdout).unwrap()
}

fn value_of(rows: &[serde_json::Value], quantity: &str) -> f64 {
    rows.iter()
        .find(|r| r["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no {quantity}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn opt_of_uniform_pair() {
    let o = prophet(&["opt", &data("hem_2box.json"), "--format", "json"]);
    assert!(o.status.success());
    assert!((value_of(&json_rows(&o), "expected_max") - 0.5053).abs() < 1e-3);
}

#[test]
fn spectrum_of_hemh_priors() {
    let o = prophet(&["spectrum", &data("hemh_3box.json"), "--format", "json"]);
    assert!(o.status.success());
    assert!((value_of(&json_rows(&o), "t_kw") - 19.0 / 54.0).abs() < 1e-12);
}

#[test]
fn mixture_file_loads_with_expected_mean() {
    let o = prophet(&[
        "equilibrium",
        &data("medianh_2box.json"),
        "--policy",
        "median",
        "--frozen",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json_rows(&o);
    assert!((value_of(&rows, "box1_posterior_mean") - 13.0 / 72.0).abs() < 1e-12);
    assert!((value_of(&rows, "searcher_payoff") - 13.0 / 72.0).abs() < 1e-12);
    assert_eq!(
        rows.iter().find(|r| r["quantity"] == "ratio_vs_half_opt").unwrap()["verdict"],
        "below-half"
    );
}

#[test]
fn reproduce_dp_three_box_csv() {
    let o = prophet(&["reproduce", "dp-3box", "--format", "csv"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["case_id", "quantity", "value", "reference", "verdict"]
    );
    let recs: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let get = |q: &str| recs.iter().find(|r| &r[1] == q).unwrap().clone();
    assert_eq!(&get("searcher_payoff")[2], "0.25");
    assert_eq!(&get("opt")[2], "0.55");
    assert_eq!(&get("ratio_vs_half_opt")[4], "below-half");
}

#[test]
fn reproduce_unknown_case_is_input_error() {
    let o = prophet(&["reproduce", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_reports_failed_inequality_with_exit_one() {
    // The finite asymptotic-instance clause does not hold at n = 30.
    let o = prophet(&["reproduce", "iid-percentage", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("n30_strategic_ratio_cap"));
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    let o = prophet(&["opt", &data("bad_mass.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("box 1"));
    let o = prophet(&["opt", &data("bad_schema.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(
        err.contains("at [1] (line") && err.contains("missing field `b`"),
        "{err}"
    );
    let o = prophet(&["opt", &data("missing.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strategic_payoff_agrees_with_simulation() {
    let file = data("dp_3box.json");
    let p = prophet(&[
        "payoff",
        &file,
        "--threshold",
        "0.3",
        "--mode",
        "strategic",
        "--format",
        "json",
    ]);
    let exact = value_of(&json_rows(&p), "strategic_payoff");
    let s = prophet(&[
        "simulate",
        &file,
        "--threshold",
        "0.3",
        "--samples",
        "200000",
        "--seed",
        "5",
        "--format",
        "json",
    ]);
    assert!(s.status.success());
    let rows = json_rows(&s);
    let (mean, se) = (value_of(&rows, "payoff_mean"), value_of(&rows, "payoff_stderr"));
    assert!((mean - exact).abs() <= 4.0 * se, "{mean} ± {se} vs {exact}");
}

#[test]
fn simulation_output_is_byte_identical_and_seed_falls_back_to_env() {
    let file = data("hem_2box.json");
    let args = [
        "simulate",
        file.as_str(),
        "--policy",
        "hem",
        "--samples",
        "20000",
        "--seed",
        "9",
    ];
    let a = prophet(&args);
    let b = prophet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_prophet"))
        .args(["simulate", &file, "--policy", "hem", "--samples", "20000"])
        .env("PROPHET_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a.stdout, env.stdout);
}

#[test]
fn best_response_rows() {
    let o = prophet(&[
        "best-response",
        &data("hem_2box.json"),
        "--threshold",
        "0.375",
        "--format",
        "json",
    ]);
    let rows = json_rows(&o);
    // U[0, 0.5] pools [0.25, 0.5] to mean 0.375.
    assert!((value_of(&rows, "box1_cutoff") - 0.25).abs() < 1e-12);
    assert!((value_of(&rows, "box1_accept_prob") - 0.5).abs() < 1e-12);
    assert_eq!(rows[0]["reference"], "threshold-signaling");
}

#[test]
fn non_frozen_equilibrium_needs_two_boxes() {
    let o = prophet(&["equilibrium", &data("dp_3box.json"), "--policy", "dp"]);
    assert_eq!(o.status.code(), Some(2));
    let o = prophet(&[
        "equilibrium",
        &data("hem_2box.json"),
        "--policy",
        "hem",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    assert!((value_of(&json_rows(&o), "searcher_payoff") - 0.25).abs() < 1e-12);
}

#[test]
fn table_has_header_and_aligned_columns() {
    let o = prophet(&["opt", &data("hem_2box.json")]);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("case_id") && header.ends_with("verdict"));
    assert!(lines.next().unwrap().contains("0.505"));
}

#[test]
fn reproduce_all_emits_one_row_per_case() {
    let o = prophet(&["reproduce", "all", "--format", "json"]);
    let rows = json_rows(&o);
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| !r["reference"].as_str().unwrap().is_empty()));
    // Only the finite asymptotic-instance clause fails.
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| r["verdict"] == "fail")
        .map(|r| r["case_id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["iid-percentage"]);
    assert_eq!(o.status.code(), Some(1));
}
