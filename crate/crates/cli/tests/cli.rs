use std::process::{Command, Output};

fn dlm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlm")).args(args).output().expect("dlm runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn density_exact_text() {
    let o = dlm(&["density", "--l", "4", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("17/160 11/320"));
}

#[test]
fn odd_circumference_is_a_usage_error() {
    let o = dlm(&["density", "--l", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn density_range_csv() {
    let o = dlm(&["density", "--l-range", "2:12", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L,nu_c_num,nu_c_den,nu_nc_num,nu_nc_den,nu_c_float,nu_nc_float");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[3], "6,913,8960,421,26880,0.10189732142857143,0.01566220238095238");
}

#[test]
fn density_json_is_lossless() {
    let o = dlm(&["density", "--l", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["nu_c"]["num"], "913");
    assert_eq!(v[0]["nu_nc"]["den"], "26880");
    assert_eq!(v[0]["method"], "closed_form");
}

#[test]
fn verify_suites_pass() {
    let o = dlm(&["verify", "all", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dlm(&["verify", "kummer", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_report_shape() {
    let o = dlm(&["verify", "tq", "--n-max", "5", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 6 * 5);
    assert!(rows.iter().all(|r| r["status"] == "pass" && r["identity"].is_string() && r["n"].is_u64()));
}

#[test]
fn oracle_matches() {
    let o = dlm(&["oracle", "--l", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("EXACT-MATCH") && text.contains("913/8960") && text.contains("421/26880"));
    let o = dlm(&["oracle", "--l", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("EXACT-MATCH"));
}

#[test]
fn oracle_size_guard() {
    assert_eq!(dlm(&["oracle", "--l", "10"]).status.code(), Some(2));
    assert_eq!(dlm(&["oracle", "--l", "5"]).status.code(), Some(2));
}

#[test]
fn oracle_dump() {
    let path = std::env::temp_dir().join(format!("dlm-oracle-{}.json", std::process::id()));
    let o = dlm(&["oracle", "--l", "4", "--dump", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(v.is_object());
}

#[test]
fn simulate_is_deterministic_and_on_target() {
    let args = ["simulate", "--l", "4", "--height", "200000", "--replicas", "16", "--seed", "7"];
    let a = dlm(&args);
    let b = dlm(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["z_nu_c"].as_f64().unwrap().abs() < 4.0);
    assert!(v["z_nu_nc"].as_f64().unwrap().abs() < 4.0);
    assert_eq!(v["exact_nu_c"], "17/160");
    assert_eq!(v["exact_nu_nc"], "11/320");
}

#[test]
fn simulate_thread_count_does_not_change_output() {
    let args = ["simulate", "--l", "2", "--height", "2000", "--replicas", "6", "--seed", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_dlm")).args(args).env("DLM_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_dlm")).args(args).env("DLM_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn simulate_height_guard() {
    assert_eq!(dlm(&["simulate", "--l", "4", "--height", "10"]).status.code(), Some(2));
    assert_eq!(dlm(&["simulate", "--l", "3", "--height", "300"]).status.code(), Some(2));
}

fn asymptote_rows(args: &[&str]) -> Vec<Vec<f64>> {
    let o = dlm(args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L,exact,series,residual,scaled"));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn asymptote_leading_correction() {
    let rows = asymptote_rows(&["asymptote", "--l-range", "2:400", "--order", "0"]);
    assert_eq!(rows[0][0], 2.0);
    assert!(rows.iter().all(|r| r.iter().all(|x| x.is_finite())));
    let last = rows.last().unwrap();
    let target = 1.0 / (4.0 * 3f64.sqrt());
    assert!((last[4] - target).abs() < 0.01 * target, "{last:?}");
}

#[test]
fn asymptote_higher_order_plateau() {
    let args = |l: &'static str| ["asymptote", "--l-range", l, "--order", "2", "--quantity", "nc"];
    let at_100 = asymptote_rows(&args("100:100"))[0][4];
    let at_200 = asymptote_rows(&args("200:200"))[0][4];
    let ratio = at_100 / at_200;
    assert!((0.5..=2.0).contains(&ratio), "{at_100} {at_200}");
}

#[test]
fn bad_order_is_a_usage_error() {
    assert_eq!(dlm(&["asymptote", "--order", "3"]).status.code(), Some(2));
}
