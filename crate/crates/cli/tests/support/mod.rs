//! Bundled fixture table and a runner for the `zcat` binary.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub const COMMANDS: &[&str] =
    &["validate", "z-compose", "site-check", "blur-check", "sheaf-check", "parametrize", "model-check", "fingerprint"];

/// Documented exit code for every (fixture, command) pair.
pub fn expected_code(fixture: &str, command: &str) -> i32 {
    match (fixture, command) {
        ("malformed.json", _) => 2,
        ("failing.json", "site-check" | "blur-check" | "sheaf-check" | "model-check") => 1,
        ("unverifiable.json", "sheaf-check") => 1,
        _ => 0,
    }
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixtures() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn zcat(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_zcat"))
        .args(args)
        .current_dir(fixture_dir())
        .output()
        .expect("spawn zcat");
    Run { code: out.status.code().expect("exit code"), stdout: out.stdout, stderr: out.stderr }
}
