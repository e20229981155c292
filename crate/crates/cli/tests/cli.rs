use std::process::{Command, Output};

use ncdisc_cli::report::validate_json;

fn ncdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdisc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn bracket_linear_pair_is_exact() {
    let o = ncdisc(&["sphere-bracket", "--f", "Y1,0", "--g", "Y1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&stdout(&o));
    assert_eq!(t[0], ["m", "beta_m", "c_m", "defect", "norm_Tf", "supnorm_f", "fitted_p"]);
    assert_eq!(t.len(), 5);
    for r in &t[1..] {
        assert!(r[3].parse::<f64>().unwrap() <= 1e-10);
    }
    assert!(t[1..4].iter().all(|r| r[6].is_empty()) && !t[4][6].is_empty());
}

#[test]
fn bracket_single_resolution_cannot_fit() {
    assert_eq!(ncdisc(&["sphere-bracket", "--m", "8"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["sphere-bracket", "--f", "Y9"],
        vec!["sphere-bracket", "--f", "Y1,5"],
        vec!["sphere-bracket", "--m", "16,8"],
        vec!["sphere-bracket", "--m", "1,2,3"],
        vec!["sphere-spectrum", "--m", "65"],
        vec!["circle", "--n", "abc"],
        vec!["transfer", "--psi", "sine:2"],
        vec!["heat", "--init", "Y1,0"],
        vec!["circle", "--tol", "-1"],
        vec!["report", "--dir", "/nonexistent/ncdisc"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = ncdisc(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn spectrum_small_dimensions() {
    let o = ncdisc(&["sphere-spectrum", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = rows(&stdout(&o));
    assert_eq!(t.len(), 2);
    assert_eq!(t[1][0], "0");
    assert_eq!(t[1][4], "1");
    for v in &t[1][1..4] {
        assert_eq!(v.parse::<f64>().unwrap(), 0.0);
    }

    let t = rows(&stdout(&ncdisc(&["sphere-spectrum", "--m", "2"])));
    assert_eq!(t.len(), 3);
    assert_eq!((t[1][0].as_str(), t[1][4].as_str()), ("0", "1"));
    assert_eq!((t[2][0].as_str(), t[2][4].as_str()), ("1", "3"));
    assert_eq!(t[2][1].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn spectrum_m16_passes() {
    let o = ncdisc(&["sphere-spectrum", "--m", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&stdout(&o)).len(), 17);
}

#[test]
fn circle_json_carries_verdicts() {
    let o = ncdisc(&["circle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["n", "consistency_defect", "leibniz_defect", "blockdiag_defect"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    let v = &doc["verdict"];
    assert_eq!(v["block-diagonal"]["details"]["verdict"]["preservation"], "strongly-structure-preserving");
    assert_eq!(v["euler-leibniz"]["details"]["verdict"]["preservation"], "not-structure-preserving");
    assert_eq!(v["euler-consistency"]["details"]["verdict"]["preservation"], "consistent");
    for r in doc["rows"].as_array().unwrap() {
        assert!(r["blockdiag_defect"].as_f64().unwrap() <= 1e-12);
        assert!(r["leibniz_defect"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn transfer_commands() {
    let o = ncdisc(&["transfer", "--psi", "rotation:3", "--n", "8,16,32"]);
    assert_eq!(o.status.code(), Some(0));
    for r in &rows(&stdout(&o))[1..] {
        assert_eq!((r[5].as_str(), r[6].as_str()), ("true", "true"));
    }
    assert_eq!(ncdisc(&["transfer"]).status.code(), Some(0));
    assert_eq!(ncdisc(&["transfer", "--weighted", "--f", "cos"]).status.code(), Some(0));
}

#[test]
fn berezin_and_heat_pass() {
    let o = ncdisc(&["berezin", "--ell", "1,2", "--m", "8,16,32"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&stdout(&o)).len(), 7);
    // ℓ = 3 is still 16% off at m = 32.
    assert_eq!(ncdisc(&["berezin", "--ell", "3", "--m", "8,16,32"]).status.code(), Some(2));
    let o = ncdisc(&["heat", "--m", "6", "--init", "Y2,1=0.3", "--init", "Y0,0=2", "--t", "0,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let o = ncdisc(&["berezin", "--ell", "1,2", "--m", "8,16,32", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    assert!(!first.contains(&b'\r'));
    let single = Command::new(env!("CARGO_BIN_EXE_ncdisc"))
        .args(["berezin", "--ell", "1,2", "--m", "8,16,32"])
        .env("NCDISC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, first);
    let bad = Command::new(env!("CARGO_BIN_EXE_ncdisc"))
        .args(["circle"])
        .env("NCDISC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn report_rejects_malformed_bundles() {
    assert!(validate_json("{}").is_err());
    assert!(validate_json(r#"{"schema":"ncdisc-report/1","pass":true,"theorems":[]}"#).is_err());
    let entry = |id: &str| {
        format!(r#"{{"id":"{id}","claim":"c","sources":["a.csv"],"pass":true,"fitted_exponents":[],"details":{{}}}}"#)
    };
    let six: Vec<String> = (0..6).map(|i| entry(&format!("t{i}"))).collect();
    let ok = format!(r#"{{"schema":"ncdisc-report/1","pass":true,"theorems":[{}]}}"#, six.join(","));
    assert!(validate_json(&ok).is_ok());
    let lying = ok.replacen(r#""pass":true,"theorems""#, r#""pass":false,"theorems""#, 1);
    assert!(validate_json(&lying).is_err());
    let extra = ok.replacen(r#""schema""#, r#""extra":1,"schema""#, 1);
    assert!(validate_json(&extra).is_err());
}
