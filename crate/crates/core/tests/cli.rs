use std::path::PathBuf;
use std::process::{Command, Output};

fn certify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certify")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn run_prints_summary_and_writes_deterministic_certificate() {
    let (a, b) = (tmp("cert-a.txt"), tmp("cert-b.txt"));
    for path in [&a, &b] {
        let out = certify(&["run", "--certificate", path.to_str().unwrap()]);
        assert!(out.status.success());
        let stdout = String::from_utf8_lossy(&out.stdout);
        let lines: Vec<&str> = stdout.lines().collect();
        assert_eq!(lines[0], "radius      = 1.0e-7");
        assert!(lines[1].starts_with("|Phi(f)-f| < 4.83"), "{}", lines[1]);
        assert!(lines[2].starts_with("|DPhi|     < 0.1584"), "{}", lines[2]);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.contains("status = certified"));
    assert!(text.contains("residual.7 = "));
}

#[test]
fn failed_threshold_exits_with_one() {
    let out = certify(&["--iters", "0", "run", "--certificate", tmp("cert-fail.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps"));
    let text = std::fs::read_to_string(tmp("cert-fail.txt")).unwrap();
    assert!(text.contains("status = failed"));
}

#[test]
fn sampled_hyperbolicity_is_labelled_and_independent_of_jobs() {
    let mut texts = Vec::new();
    for jobs in ["1", "2"] {
        let path = tmp(&format!("cert-hyper-{jobs}.txt"));
        let out = certify(&[
            "hyperbolicity", "--sample", "6", "--seed", "3", "--jobs", jobs,
            "--certificate", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains("evidence only"));
        texts.push(std::fs::read_to_string(path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert!(texts[0].contains("hyper.mode = sampled"));
}

#[test]
fn eig_lists_leading_eigenvalues() {
    let out = certify(&["eig"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let first: f64 = stdout.split_whitespace().next().unwrap().parse().unwrap();
    assert!((first - 23.36530).abs() < 1e-3 * 23.36530);
    assert_eq!(stdout.lines().count(), 26);
}

#[test]
fn invalid_literal_aborts() {
    let out = certify(&["--sf", "2,2", "run", "--certificate", tmp("cert-bad.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid decimal literal"));
}
