use std::path::Path;
use std::process::{Command, Output};

fn qwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwc"))
        .args(args)
        .env_remove("QWC_SEED")
        .output()
        .unwrap()
}

fn data(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn walk_one_step() {
    let o = qwc(&["walk", "--theta", "0.7853981634", "--steps", "1"]);
    assert!(o.status.success());
    let rows = data(&stdout(&o));
    assert_eq!(rows[0], "x,p");
    let parsed: Vec<(i64, f64)> = rows[1..]
        .iter()
        .map(|r| {
            let (x, p) = r.split_once(',').unwrap();
            (x.parse().unwrap(), p.parse().unwrap())
        })
        .collect();
    assert_eq!(parsed.len(), 2);
    assert_eq!((parsed[0].0, parsed[1].0), (-1, 1));
    assert!((parsed[0].1 - 0.5).abs() < 1e-12 && (parsed[1].1 - 0.5).abs() < 1e-12);
}

#[test]
fn walk_zero_steps() {
    let rows = data(&stdout(&qwc(&["walk", "--steps", "0"])));
    assert_eq!(rows.len(), 2);
    let (x, p) = rows[1].split_once(',').unwrap();
    assert_eq!(x, "0");
    assert!((p.parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn eop_rows() {
    let rows = data(&stdout(&qwc(&["eop", "--theta", "pi/4", "--steps", "5"])));
    assert_eq!(rows[0], "t,eop");
    let e: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert_eq!(e.len(), 6);
    assert!(e[0].abs() < 1e-12);
    assert!((e[1] - 2f64.ln()).abs() < 1e-12);
    assert!(e.iter().all(|x| *x >= -1e-12 && *x <= 2f64.ln() + 1e-12));
}

#[test]
fn header_records_seed_and_config() {
    let text = stdout(&qwc(&[
        "complexity", "--mode", "direct", "--steps", "3", "--samples", "5", "--seed", "11",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# qwc "));
    assert_eq!(lines[1], "# seed: 11");
    assert!(lines[2].starts_with("# config: {") && lines[2].contains("\"mode\":\"direct\""));
    assert!(lines[3].starts_with("# config-sha256: "));
    assert_eq!(lines[4], "t,C");
    assert_eq!(lines.len(), 8);
}

#[test]
fn seed_env_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qwc"));
        c.args(["complexity", "--steps", "3", "--samples", "5", "--seed", seed]);
        match env {
            Some(v) => c.env("QWC_SEED", v),
            None => c.env_remove("QWC_SEED"),
        };
        data(&stdout(&c.output().unwrap()))
    };
    assert_eq!(run(Some("3"), "99"), run(None, "3"));
    assert_ne!(run(None, "3"), run(None, "99"));
}

#[test]
fn stepwise_cumulative_is_monotone() {
    let rows = data(&stdout(&qwc(&["complexity", "--steps", "8", "--samples", "20"])));
    assert_eq!(rows[0], "t,C_increment,C_cumulative");
    let cum: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(cum.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn slope_grid_has_thirteen_rows() {
    let rows = data(&stdout(&qwc(&[
        "slope", "--theta-grid", "0:pi:13", "--steps", "4", "--samples", "4",
    ])));
    assert_eq!(rows[0], "theta,alpha,beta,r2");
    assert_eq!(rows.len(), 14);
}

#[test]
fn json_mirrors_csv_rows() {
    let args = ["circuit", "--steps", "3", "--samples", "10"];
    let csv = data(&stdout(&qwc(&args)));
    let o = qwc(&[&args[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), csv.len() - 1);
    assert_eq!(rows[0]["depth"], 7);
    assert_eq!(v["circuits"].as_array().unwrap().len(), 3);
    assert_eq!(v["seed"], 7);
}

#[test]
fn continuum_table() {
    let rows = data(&stdout(&qwc(&["continuum", "--cutoff", "2", "--table", "4"])));
    assert_eq!(rows[0], "p1,p2,v10,v15");
    assert_eq!(rows.len(), 26);
}

#[test]
fn dump_algebra_json() {
    let o = qwc(&["dump-algebra", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 15);
    assert_eq!(v["killing"][3][3], 1.0);
    assert!(v["rows"].as_array().unwrap().iter().any(|r| r["i"] == 1 && r["j"] == 2 && r["k"] == 5 && r["f"] == -2.0));
}

#[test]
fn refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("walk.csv");
    let path = out.to_str().unwrap();
    assert!(qwc(&["walk", "--steps", "2", "--output", path]).status.success());
    let before = std::fs::read_to_string(&out).unwrap();
    let again = qwc(&["walk", "--steps", "3", "--output", path]);
    assert_eq!(again.status.code(), Some(2));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), before);
    assert!(qwc(&["walk", "--steps", "3", "--output", path, "--force"]).status.success());
    assert_ne!(std::fs::read_to_string(Path::new(path)).unwrap(), before);
}

#[test]
fn thread_count_does_not_change_rows() {
    let args = ["complexity", "--mode", "stepwise", "--steps", "6", "--samples", "40"];
    let one = data(&stdout(&qwc(&[&args[..], &["--threads", "1"]].concat())));
    let many = data(&stdout(&qwc(&[&args[..], &["--threads", "8"]].concat())));
    assert_eq!(one, many);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["complexity", "--k", "5"],
        vec!["complexity", "--samples", "0"],
        vec!["walk", "--theta", "tau"],
        vec!["convergence", "--sizes", "50,10"],
        vec!["continuum", "--cutoff", "-1"],
        vec!["slope", "--theta-grid", "0:pi:0"],
        vec!["walk", "--threads", "0"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qwc(&args).status.code(), Some(2), "{args:?}");
    }
}
