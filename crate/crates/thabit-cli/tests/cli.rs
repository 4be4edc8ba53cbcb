use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn thabit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thabit"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn bases_below_two_are_usage_errors() {
    let o = thabit(&["solve", "--b", "1", "--g", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 2"));
    assert_eq!(
        thabit(&["solve", "--b", "3", "--g", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        thabit(&["solve", "--b", "3", "--mode", "product"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn solve_writes_json_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b10.json");
    let o = thabit(&[
        "solve",
        "--b",
        "10",
        "--g",
        "10",
        "--mode",
        "sum",
        "--base-sign",
        "-",
        "--const-sign",
        "+",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let text = v.to_string();
    assert!(
        text.contains("\"d1\":3") && text.contains("\"d2\":8"),
        "{text}"
    );
}

#[test]
fn solve_csv_rows() {
    let o = thabit(&[
        "solve",
        "--b",
        "10",
        "--mode",
        "sum",
        "--base-sign",
        "-",
        "--const-sign",
        "+",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "b,g,base_sign,const_sign,mode,d1,d2,l,m,n");
    assert!(lines.contains(&"10,10,-1,1,sum,3,8,1,2,1"));
    assert_eq!(lines.len(), 11);
}

#[test]
fn suite_csv_rows() {
    let o = thabit(&[
        "suite", "--b", "2,3", "--g", "10", "--mode", "sum", "--format", "csv",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(&lines[..3], ["sum,2,3", "m-l<=,34,35", "n-2<=,119,77"]);
    assert!(lines.contains(&"N=,66,37"));
    assert!(!out.contains('\r'));
}

#[test]
fn suite_rejects_a_single_sign() {
    let o = thabit(&["suite", "--b", "2", "--base-sign", "+"]);
    assert!(!o.status.success());
}

#[test]
fn bounds_and_families_print() {
    let o = thabit(&["bounds", "--b", "12", "--mode", "diff", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("143161628126597743504217216973453"));
    let o = thabit(&["families", "--b", "2", "--g", "4", "--mode", "sum"]);
    assert!(o.status.success());
    assert!(!stdout(&o).trim().is_empty());
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_thabit"))
        .args(["solve", "--b", "3", "--mode", "sum", "--format", "csv"])
        .env("THABIT_INITIAL_BITS", "lots")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("THABIT_INITIAL_BITS"));
}

#[test]
fn quick_verification_passes_within_a_minute() {
    let t = Instant::now();
    let o = thabit(&["verify", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(t.elapsed() < Duration::from_secs(60));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        4
    );
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Builds the binary with a corrupted `repunit` and checks that `verify`
/// catches it.
#[test]
fn verification_catches_a_corrupted_repunit() {
    let root = workspace();
    let target = root.join("target").join("mutant");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let build = Command::new(cargo)
        .current_dir(&root)
        .args([
            "build",
            "-q",
            "-p",
            "thabit-cli",
            "--features",
            "mutant-repunit",
            "--target-dir",
        ])
        .arg(&target)
        .status()
        .expect("cargo runs");
    assert!(build.success());
    let o = Command::new(target.join("debug").join("thabit"))
        .args(["verify", "--quick"])
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stdout(&o).contains("FAIL family members"), "{}", stdout(&o));
}
