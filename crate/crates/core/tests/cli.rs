//! End-to-end checks of the `odebench` binary: artifacts on disk, exit
//! codes, and stderr diagnostics.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn odebench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_odebench"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["run"])
        .arg(scenario("logistic.toml"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    for file in ["trajectories.csv", "errors.csv", "costs.csv", "plot.svg"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
}

#[test]
fn blow_up_is_not_a_tool_failure() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["run"])
        .arg(scenario("market.toml"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "exit should be 0 despite blow-up");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("blew up") || stdout.contains("underflow"), "{stdout}");
}

#[test]
fn unknown_solver_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["run"])
        .arg(scenario("logistic.toml"))
        .arg("--out")
        .arg(dir.path())
        .args(["--solvers", "euler,warp9"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("warp9"));
}

#[test]
fn invalid_scenario_exits_2_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(scenario("logistic.toml"))
        .unwrap()
        .replace("capacity = 1000.0", "capacity = -5.0")
        .replace("../fixtures", "../../fixtures");
    std::fs::write(&bad, text).unwrap();

    let output =
        odebench().args(["run"]).arg(&bad).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("capacity"), "{}", stderr_of(&output));
}

#[test]
fn missing_scenario_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["run", "/no/such/scenario.toml", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "not a directory").unwrap();
    let output = odebench()
        .args(["run"])
        .arg(scenario("logistic.toml"))
        .arg("--out")
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{}", stderr_of(&output));
}

#[test]
fn convergence_writes_orders_csv() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["convergence", "--model", "linear", "--steppers", "euler,rk4"])
        .args(["--h", "0.1,0.05,0.025", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    let orders = std::fs::read_to_string(dir.path().join("orders.csv")).unwrap();
    assert!(orders.starts_with("#") || orders.contains("stepper,h,error,observed_order"));
    assert!(orders.contains("euler"));
    assert!(orders.contains("rk4"));
}

#[test]
fn convergence_without_oracle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = odebench()
        .args(["convergence", "--model", "market", "--steppers", "euler"])
        .args(["--h", "0.1,0.05", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("oracle"));
}

#[test]
fn fixtures_regenerate_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fx");
    for _ in 0..2 {
        let output = odebench().args(["fixtures", "--out"]).arg(&out).output().unwrap();
        assert!(output.status.success());
    }
    // and they match the committed copies byte for byte
    let committed = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for entry in std::fs::read_dir(&out).unwrap() {
        let entry = entry.unwrap();
        let fresh = std::fs::read(entry.path()).unwrap();
        let shipped = std::fs::read(committed.join(entry.file_name())).unwrap();
        assert_eq!(fresh, shipped, "{:?} drifted from committed fixture", entry.file_name());
    }
}
