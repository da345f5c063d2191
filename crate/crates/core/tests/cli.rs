//! Command-line behaviour: outputs, exit codes, determinism, data override.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affine-fermionic")).args(args).env_remove("AFFINE_FERMIONIC_DATA_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fermionic_example() {
    let o = run(&["fermionic", "A1~1", "--W", "1:1:2,1:2:1", "--lambda", "0", "--level", "inf", "--inverse-q"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q^2");
    let o = run(&["fermionic", "A1~1", "--W", "1:1:2,1:2:1", "--lambda", "2", "--inverse-q"]);
    assert_eq!(stdout(&o).trim(), "q + q^2");
    let o = run(&["--format", "json", "fermionic", "A1~1", "--W", "1:1:2,1:2:1", "--lambda", "0", "--inverse-q"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["series"]["terms"], serde_json::json!([["2/1", 1]]));
}

#[test]
fn fermionic_forms() {
    let o = run(&["fermionic", "A1~1", "--W", "1:1:2", "--form", "mtilde", "--lambda", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--order", "6", "fermionic", "A1~1", "--W", "1:1:4", "--level", "2", "--form", "ms", "--S", "1:1"]);
    assert_eq!(stdout(&o).trim(), "q^2 + q^3 + 4*q^4 + 3*q^5 + O(q^(6))");
    // M^S needs an order.
    let o = run(&["fermionic", "A1~1", "--W", "1:1:4", "--level", "2", "--form", "ms"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dilog_example() {
    let o = run(&["--format", "json", "dilog", "A2~2", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["abs_err"].as_f64().unwrap() < 1e-9);
    let pi2_5 = std::f64::consts::PI.powi(2) / 5.0;
    assert!((v["lhs"].as_f64().unwrap() - pi2_5).abs() < 1e-9);
    for key in ["algebra", "level", "f", "lhs", "rhs", "abs_err"] {
        assert!(v.get(key).is_some(), "{}", key);
    }
}

#[test]
fn other_subcommands() {
    let o = run(&["--order", "4", "stringfunc", "A1~1", "--level", "2"]);
    assert_eq!(stdout(&o).trim(), "1 + q + 3*q^2 + 5*q^3 + O(q^(4))");
    let o = run(&["onedsum", "C2~1", "--kinds", "1,1", "--compare"]);
    assert!(stdout(&o).trim().ends_with("conjectural-pass"));
    let o = run(&["rtable", "D4~3", "--s1", "2", "--s2", "1", "--diff"]);
    assert!(stdout(&o).contains("0 mismatches"), "{}", stdout(&o));
    let o = run(&["rtable", "C2~1"]);
    assert!(stdout(&o).starts_with("C2~1 B^{1,1} ⊗ B^{1,1}"));
    let o = run(&["qsystem", "chi", "D4~3", "--gprime", "G2", "--a", "2", "--j", "1"]);
    assert_eq!(stdout(&o).trim(), "2*V(L1) + V(L2) + V(0)");
    let o = run(&["qsystem", "verify", "A4~2", "--a", "1", "--j", "2"]);
    assert!(stdout(&o).trim().ends_with("holds"));
    let o = run(&["qsystem", "completeness", "D4~3", "--W", "2:1"]);
    assert!(stdout(&o).trim().ends_with("holds"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["fermionic", "X9~1"]).status.code(), Some(2));
    assert_eq!(run(&["fermionic", "A2~1", "--lambda", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "yaml", "dilog", "A1~1", "--level", "2"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "onedsum", "D4~3", "--kinds", "2,1,1", "--lambda", "1,0"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for e in std::fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let target = to.join(e.file_name());
        if e.file_type().unwrap().is_dir() {
            copy_dir(&e.path(), &target);
        } else {
            std::fs::copy(e.path(), target).unwrap();
        }
    }
}

#[test]
fn data_dir_override() {
    let tmp = tempfile::tempdir().unwrap();
    copy_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"), tmp.path());
    let dir = tmp.path().to_str().unwrap();
    let o = run(&["--data-dir", dir, "rtable", "C2~1", "--s1", "2", "--s2", "2", "--diff"]);
    assert!(stdout(&o).contains("0 mismatches"));
    // Corrupt the copy: the flag and the environment variable both see it.
    let file = tmp.path().join("crystals/C2_1/B1_2.crystal");
    let text = std::fs::read_to_string(&file).unwrap().replace("version 1", "version 99");
    std::fs::write(&file, text).unwrap();
    let o = run(&["--data-dir", dir, "rtable", "C2~1", "--s1", "2", "--s2", "2", "--diff"]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_affine-fermionic"))
        .args(["rtable", "C2~1", "--s1", "2", "--s2", "2", "--diff"])
        .env("AFFINE_FERMIONIC_DATA_DIR", dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("crystal data error"));
}

#[test]
fn verify_all_quick() {
    let o = run(&["verify-all", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v["records"].as_array().unwrap();
    for i in 1..=10 {
        let prefix = format!("c{:02}/", i);
        assert!(recs.iter().any(|r| r["check_id"].as_str().unwrap().starts_with(&prefix)), "criterion {}", i);
    }
    assert!(recs.iter().all(|r| r["status"] != "fail"));
}
