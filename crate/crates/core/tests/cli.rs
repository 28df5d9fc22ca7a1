//! The installed binary driven through files and pipes.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use sitoform::site_io::ReportDocument;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sitoform"))
}

fn piped(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sitoform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn example_to_file_then_check() {
    let site = scratch("z3.json");
    let status = bin()
        .args(["example", "gsets", "--cyclic", "3", "--out"])
        .arg(&site)
        .status()
        .unwrap();
    assert!(status.success());
    for check in [
        &["check", "category"][..],
        &["check", "site"],
        &["check", "ysite"],
        &["galois", "enough"],
    ] {
        let out = bin().args(check).arg("--in").arg(&site).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{check:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = ReportDocument::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert!(report.pass);
        assert_eq!(report.inputs_hash.len(), 64);
    }
}

#[test]
fn equivalence_and_point_checks_pass_on_z2() {
    let site = piped(&["example", "gsets", "--cyclic", "2"], b"").stdout;
    let equiv = piped(&["equiv", "verify", "--bound", "3"], &site);
    assert_eq!(equiv.status.code(), Some(0));
    let point = piped(&["point", "check", "--points", "3"], &site);
    assert_eq!(point.status.code(), Some(0));
}

#[test]
fn successor_window_exit_codes_follow_the_margin() {
    let site = piped(&["example", "succ", "--n", "8", "--plus"], b"").stdout;
    assert_eq!(
        piped(&["check", "site", "--window-margin", "2"], &site)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(piped(&["check", "site"], &site).status.code(), Some(3));
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = bin()
        .args(["check", "category", "--in", "/nonexistent/site.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
