use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn linform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linform"))
        .args(args)
        .output()
        .expect("runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("linform-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_t8_stores_exponents() {
    let out = linform(&["construct", "t8", "--tau", "3", "--terms", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let alpha: Vec<u64> = serde_json::from_value(v["alpha"].clone()).unwrap();
    assert_eq!(alpha, vec![1, 10, 90, 808, 7270]);
    assert_eq!(v["A"][1], "1024");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(linform(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        linform(&["construct", "t8", "--tau", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        linform(&["exponents", "/nonexistent/seq.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failing_report_exits_one() {
    let out = linform(&["verify", "t8", "--tau", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["checks"][0]["status"], "FAIL");
}

#[test]
fn verify_cf_passes_and_writes_sidecar() {
    let dir = scratch("cf");
    let path = dir.join("report.json");
    let out = linform(&[
        "verify",
        "cf",
        "--tau",
        "5/2",
        "--terms",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] != "FAIL"));
    assert!(dir.join("report.stats.json").exists());
}

#[test]
fn bestapprox_then_exponents() {
    let dir = scratch("seq");
    let inst = dir.join("inst.json");
    let seq = dir.join("seq.json");
    let exp = dir.join("exp.json");
    assert!(linform(&[
        "construct",
        "t8",
        "--tau",
        "3",
        "--terms",
        "3",
        "--out",
        inst.to_str().unwrap()
    ])
    .status
    .success());
    let out = linform(&[
        "bestapprox",
        "--target",
        inst.to_str().unwrap(),
        "--qmax",
        "100000",
        "--out",
        seq.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&seq).unwrap()).unwrap();
    let records = s["records"].as_array().unwrap();
    assert_eq!(records[3]["q"], serde_json::json!(["1024", "0", "-513"]));
    assert!(records[3]["value_lo"].as_str().unwrap().contains('/'));
    let csv = std::fs::read_to_string(dir.join("seq.csv")).unwrap();
    assert!(csv.starts_with("index,norm,log10_value\n"));
    assert!(linform(&[
        "exponents",
        seq.to_str().unwrap(),
        "--window",
        "auto",
        "--out",
        exp.to_str().unwrap()
    ])
    .status
    .success());
    let csv = std::fs::read_to_string(dir.join("exp.csv")).unwrap();
    assert!(csv.starts_with("j,o_lo,o_hi,u_lo,u_hi\n"));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = scratch("config");
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"command": ["dims", "theta"], "n": 3}"#).unwrap();
    let a = linform(&["--config", cfg.to_str().unwrap()]);
    let b = linform(&["dims", "theta", "--n", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // explicit flags win over the file
    let c = linform(&["--config", cfg.to_str().unwrap(), "--n", "4"]);
    assert_eq!(json_of(&c)["n"], 4);
}

#[test]
fn dims_gamma_prints_twelve_digits() {
    let v = json_of(&linform(&["dims", "gamma", "--n", "3"]));
    let d = v["hausdorff"]["decimal"].as_str().unwrap();
    assert!(d.starts_with("1.674306090567"));
    assert_eq!(v["hausdorff"]["exact"], "(17-sqrt(13))/8");
}

#[test]
fn report_is_deterministic() {
    let a = linform(&["report", "--n-max", "4"]);
    let b = linform(&["report", "--n-max", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lattice_primitive_and_span() {
    let v = json_of(&linform(&[
        "lattice",
        "primitive",
        "--u",
        "1,0,-1",
        "--v",
        "0,1,-2",
    ]));
    assert_eq!(v["primitive"], true);
    let out = linform(&["lattice", "primitive", "--u", "2,0,0", "--v", "0,1,0"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&linform(&[
        "lattice",
        "span",
        "--vectors",
        "1,0,0;0,1,0;1,1,0",
    ]));
    assert_eq!(v["dimension"], 2);
}
