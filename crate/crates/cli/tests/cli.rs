use std::path::PathBuf;
use std::process::{Command, Output};

fn rsfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsfactor")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("rsfactor-cli-{}-{name}", std::process::id()))
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn roots_table() {
    let out = rsfactor(&["roots", "--rank", "2", "--signature", "2,1"]);
    assert!(out.status.success());
    let v = json(&out);
    let kinds: Vec<&str> = v["roots"].as_array().unwrap().iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["compact", "noncompact", "noncompact"]);

    let v = json(&rsfactor(&["roots", "--rank", "1"]));
    assert_eq!(v["roots"].as_array().unwrap().len(), 1);
    assert_eq!(v["roots"][0]["height"], 1);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["roots", "--rank", "2", "--signature", "2x1"][..],
        &["roots", "--rank", "2", "--signature", "3,1"],
        &["roots"],
        &["word", "--rank", "2", "--word", "1134"],
        &["haar-check", "--tol", "bogus=1"],
    ] {
        assert_eq!(rsfactor(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn rsf_round_trip_and_stratum_error() {
    let coords = scratch("coords.json");
    let matrix = scratch("matrix.json");
    std::fs::write(&coords, r#"{"word":[2,1],"zeta":[[0.2,0.1],[-0.4,0.3]],"torus":[0.5,0.25]}"#).unwrap();
    let fwd = rsfactor(&["rsf", "--signature", "2,1", "--dir", "fwd", "--in", coords.to_str().unwrap(), "--out", matrix.to_str().unwrap()]);
    assert!(fwd.status.success(), "{}", String::from_utf8_lossy(&fwd.stderr));

    let inv = rsfactor(&["rsf", "--signature", "2,1", "--dir", "inv", "--word", "213", "--in", matrix.to_str().unwrap()]);
    assert!(inv.status.success());
    let v = json(&inv);
    assert_eq!(v["word"], serde_json::json!([2, 1]));
    let z = v["zeta"][1].as_array().unwrap();
    assert!((z[0].as_f64().unwrap() + 0.4).abs() < 1e-12);
    assert!((z[1].as_f64().unwrap() - 0.3).abs() < 1e-12);

    let wrong = rsfactor(&["rsf", "--signature", "2,1", "--dir", "inv", "--in", matrix.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(3));

    let factor = rsfactor(&["factor", "--signature", "2,1", "--in", matrix.to_str().unwrap()]);
    assert!(factor.status.success());
    assert_eq!(json(&factor)["birkhoff"]["w"], serde_json::json!([2, 1, 3]));
    for p in [coords, matrix] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn disk_violation_exits_3() {
    let coords = scratch("disk.json");
    std::fs::write(&coords, r#"{"word":[1],"zeta":[[1.5,0.0]],"torus":[0.0]}"#).unwrap();
    let out = rsfactor(&["rsf", "--signature", "1,1", "--dir", "fwd", "--in", coords.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let _ = std::fs::remove_file(coords);
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--group", "su", "--n", "2", "--N", "1000", "--seed", "1"];
    let a = rsfactor(&args);
    let b = rsfactor(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 1001);
    let c = rsfactor(&["sample", "--group", "su", "--n", "2", "--N", "1000", "--seed", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn restricted_haar_check_passes() {
    let out = rsfactor(&["haar-check", "--rank", "2", "--signature", "2,1", "--seed", "7", "--N", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["groups"], serde_json::json!(["SU(2,1)"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn impossible_tolerance_fails_with_1() {
    let out = rsfactor(&["haar-check", "--rank", "1", "--N", "1000", "--tol", "jacobian=1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}
