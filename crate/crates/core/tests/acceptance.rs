//! Acceptance criteria 1 to 11 on the shipped reference configuration. Each
//! test writes one PASS/FAIL line to stderr, uncaptured.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use dicke::harness::config::parse_config;
use dicke::harness::report::Check;
use dicke::harness::validation::{self, Suite};

fn shipped_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/validate.conf")
}

fn suite() -> Suite {
    let text = std::fs::read_to_string(shipped_config()).expect("shipped config is readable");
    Suite::from_config(&parse_config(&text).expect("shipped config parses")).expect("modulus set")
}

fn announce(check: &Check) {
    let _ = writeln!(std::io::stderr(), "{}", check.summary_line());
}

fn verdict(check: Check) {
    announce(&check);
    assert!(check.pass, "{}\n{}", check.summary_line(), check.details);
}

#[test]
fn criterion_01_elliptic_identities() {
    verdict(validation::elliptic_identities());
}

#[test]
fn criterion_02_analytic_solves_envelope_ode() {
    verdict(validation::envelope_ode_residual(&suite()));
}

#[test]
fn criterion_03_numeric_vs_analytic_envelope() {
    let [c3, _] = validation::envelope_checks(&suite());
    verdict(c3);
}

#[test]
fn criterion_04_adiabatic_invariant_drift() {
    let [_, c4] = validation::envelope_checks(&suite());
    verdict(c4);
}

#[test]
fn criterion_05_beat_periodicity() {
    verdict(validation::beat_periodicity(&suite()));
}

#[test]
fn criterion_06_canonical_conservation() {
    verdict(validation::canonical_conservation(&suite()));
}

#[test]
fn criterion_07_paper_vs_canonical() {
    verdict(validation::paper_vs_canonical(&suite()));
}

#[test]
fn criterion_08_full_tracks_envelope() {
    verdict(validation::adiabatic_tracking(&suite()));
}

#[test]
fn criterion_09_figure_reproduction() {
    let s = suite();
    let figs = validation::figures(&s).expect("figure series");
    let a = validation::envelope_sign_flip(&s, &figs);
    let b = validation::energy_exchange_correlation(&s, &figs);
    announce(&a);
    announce(&b);
    assert!(
        a.pass && b.pass,
        "{}\n{}\n{}\n{}",
        a.summary_line(),
        a.details,
        b.summary_line(),
        b.details
    );
}

#[test]
fn criterion_10_static_fixed_points() {
    verdict(validation::static_points(&suite()));
}

#[test]
fn criterion_11_determinism() {
    let run = |dir: &Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_dicke"))
            .args(["validate", "--config"])
            .arg(shipped_config())
            .arg("--out-dir")
            .arg(dir)
            .output()
            .expect("binary runs");
        status.status.code()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (code_a, code_b) = (run(a.path()), run(b.path()));
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let mut differing = Vec::new();
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap_or_default();
        if x != y {
            differing.push(name.to_string_lossy().into_owned());
        }
    }
    let pass = code_a == code_b
        && matches!(code_a, Some(0) | Some(4))
        && names.iter().any(|n| n == "report.txt")
        && names.iter().any(|n| n.to_string_lossy().ends_with(".csv"))
        && differing.is_empty();
    let check = Check {
        criterion: 11,
        name: "determinism".into(),
        metric: differing.len() as f64,
        threshold: 0.0,
        pass,
        details: format!(
            "exit codes {code_a:?}/{code_b:?}; {} files compared; differing: {differing:?}",
            names.len()
        ),
    };
    verdict(check);
}
