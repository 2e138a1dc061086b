use std::path::Path;
use std::process::{Command, Output};

fn ffdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdg"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn field_summary_and_table() {
    let o = ffdg(&["field", "--q", "9", "--table"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("q = 9\n"));
    assert!(s.contains("modulus = 1,0,1\n"));
    assert_eq!(s.lines().filter(|l| l.contains(',')).count(), 11);

    let o = ffdg(&["field", "--q", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn sums_csv() {
    let o = ffdg(&["sums", "--q", "5"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("kind,a,b,value_re,value_im,magnitude,bound,pass")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1 + 2 * 25);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows[0].starts_with("gauss,,,"));
    assert!(rows.contains(
        &"kloosterman,0,0,4.0000000000000000e0,0.0000000000000000e0,4.0000000000000000e0,,true"
    ));
}

#[test]
fn sphere_csv() {
    let o = ffdg(&["sphere", "--q", "3", "--d", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("lambda,size,mean,margin,bound,pass\n1,4,"));
    assert_eq!(s.lines().count(), 3);
    let o = ffdg(&["sphere", "--q", "3", "--d", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn count_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let set = ffdg(&[
        "gen-set",
        "--q",
        "5",
        "--d",
        "2",
        "--density",
        "0.6",
        "--seed",
        "2",
    ]);
    assert!(set.status.success());
    let set = write(dir.path(), "a.set", &stdout(&set));
    let graph = write(
        dir.path(),
        "c4.g",
        "n 4\ne 0 1 1\ne 1 2 2\ne 2 3 3\ne 0 3 4\n",
    );
    let fast = ffdg(&["count", "--graph", &graph, "--set", &set]);
    let slow = ffdg(&["count", "--graph", &graph, "--set", &set, "--oracle"]);
    assert!(fast.status.success() && slow.status.success());
    assert_eq!(stdout(&fast), stdout(&slow));
    assert!(stdout(&fast).starts_with("C = "));

    let tight = ffdg(&[
        "count", "--graph", &graph, "--set", &set, "--oracle", "--budget", "10",
    ]);
    assert_eq!(tight.status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_ffdg"))
        .args(["count", "--graph", &graph, "--set", &set, "--oracle"])
        .env("FFDG_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&env.stderr).contains("budget"));
}

#[test]
fn full_space_counts() {
    let dir = tempfile::tempdir().unwrap();
    let full = ffdg(&["gen-set", "--q", "3", "--d", "2", "--density", "1"]);
    let set = write(dir.path(), "full.set", &stdout(&full));
    let tri = write(dir.path(), "tri.g", "n 3\ne 0 1 1\ne 1 2 1\ne 0 2 1\n");
    let o = ffdg(&["count", "--graph", &tri, "--set", &set]);
    assert_eq!(
        stdout(&o),
        "C = 36\nC* = 36\nN = 4/3 (1.3333333333333333e0)\nN* = 4/3 (1.3333333333333333e0)\n"
    );
}

#[test]
fn verify_reports() {
    let o = ffdg(&[
        "verify",
        "--suite",
        "asymptotic",
        "--q",
        "3",
        "--d",
        "7",
        "--gen",
        "path",
        "--n",
        "3",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["records"][0]["holds"], true);
    assert_eq!(v["records"][0]["set"]["alpha"], 1.0);
    assert_eq!(v["summary"]["held"], 1);

    let o = ffdg(&[
        "verify",
        "--suite",
        "asymptotic",
        "--q",
        "3",
        "--d",
        "2",
        "--gen",
        "complete",
        "--n",
        "3",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["records"][0]["status"], "not_applicable");
    assert_eq!(v["records"][0]["holds"], serde_json::Value::Null);

    let o = ffdg(&["verify", "--suite", "sigma", "--q", "9", "--d", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["checked"], 8);
    assert_eq!(v["summary"]["failed"], 0);

    let o = ffdg(&["verify", "--suite", "genuine", "--q", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ffdg(&["verify", "--suite", "bogus", "--q", "3", "--d", "2"]);
    assert!(!o.status.success());
}

#[test]
fn verify_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = ffdg(&[
        "verify",
        "--suite",
        "sums",
        "--q",
        "7",
        "--d",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["summary"]["checked"], 1 + 2 * 49);
    assert_eq!(v["summary"]["not_applicable"], 2);
}
