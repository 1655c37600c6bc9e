//! Acceptance criterion 12: goldens for every subcommand in both formats,
//! and the exit-code contract. Criteria 1 to 11 are in the core crate.

use std::path::Path;
use std::process::Command;

fn verdict(n: u32, what: &str, ok: bool) {
    println!("criterion {n}: {} {what}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {what}");
}

fn root() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_ccalg")).args(args).current_dir(root()).output().unwrap().status.code().unwrap_or(-1)
}

#[test]
fn criterion_12_cli_goldens_and_exit_codes() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let commands = [
        "validate", "check-trb", "graph-check", "induce product", "induce bimodule", "twisted-delta", "dR", "cohomology",
        "twist-coboundary", "perturb", "from-inverse", "bracket", "mc-residual", "deform linear", "deform formal",
        "deform equiv", "nijenhuis", "rigidity",
    ];
    let texts: Vec<String> = std::fs::read_dir(&golden)
        .unwrap()
        .filter_map(|e| std::fs::read_to_string(e.unwrap().path()).ok())
        .collect();
    let mut covered = true;
    for c in commands {
        for needle in [format!("command: {c}\n"), format!("\"command\": \"{c}\"")] {
            covered &= texts.iter().any(|t| t.contains(&needle));
        }
    }
    let codes = [
        exit_code(&["check-trb", "fixtures/fix_a.json"]) == 0,
        exit_code(&["check-trb", "fixtures/fix_b.json"]) == 0,
        exit_code(&["check-trb", "--op", "Bad", "fixtures/fix_a.json"]) == 1,
        exit_code(&["validate", "fixtures/not_associative.json"]) == 1,
        exit_code(&["validate", "fixtures/not_cocycle.json"]) == 1,
        exit_code(&["validate", "fixtures/bad_polynomial.json"]) == 2,
    ];
    let ok = covered && codes.iter().all(|&c| c);
    verdict(12, "CLI goldens cover every subcommand in both formats; exit codes 0/1/2", ok);
}
