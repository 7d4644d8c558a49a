use std::process::Command;

fn wallcross() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wallcross"));
    c.env_remove("WALLCROSS_REGISTRY")
        .env_remove("WALLCROSS_GOLDEN");
    c
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["frobnicate"][..],
        &["walls", "--hilbert", "3,3"],
        &["hilb"],
    ] {
        let out = wallcross().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(
        wallcross().arg("--help").output().unwrap().status.code(),
        Some(0)
    );
}

#[test]
fn text_output() {
    let out = wallcross()
        .args(["walls", "--hilbert", "3,3,-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("alpha = 1:"), "{text}");
}

#[test]
fn registry_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("registry.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = wallcross()
        .env("WALLCROSS_REGISTRY", &path)
        .arg("ext-table")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // an explicit flag wins over the environment
    let good = dir.path().join("good.json");
    std::fs::write(&good, include_str!("../../core/data/registry.json")).unwrap();
    let out = wallcross()
        .env("WALLCROSS_REGISTRY", &path)
        .args(["--registry", good.to_str().unwrap(), "ext-table"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn golden_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let text =
        include_str!("../../core/data/golden.json").replace("\"euler\": 756", "\"euler\": 757");
    std::fs::write(&path, text).unwrap();
    let out = wallcross()
        .env("WALLCROSS_GOLDEN", &path)
        .args(["poincare"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_succeeds() {
    let out = wallcross().arg("reproduce").output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
