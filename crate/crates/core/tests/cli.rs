//! End-to-end checks of the command-line surface and the file format.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubature"))
}

#[test]
fn generate_simplex3_file_has_11_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.cub");
    let out = bin()
        .args(["generate", "--region", "simplex", "--dim", "4", "--degree", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("points 11"), "{stdout}");
    let text = std::fs::read_to_string(&path).unwrap();
    let body: Vec<&str> =
        text.lines().skip_while(|l| *l != "begin-points").skip(1).collect();
    assert_eq!(body.len(), 11);
}

#[test]
fn generate_sphere16_degree5_288_points() {
    let out = bin()
        .args(["generate", "--region", "sphere", "--dim", "16", "--degree", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("points 288"));
}

#[test]
fn verify_detects_corruption_and_degree_bump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cub");
    let out = bin()
        .args(["generate", "--region", "cube", "--dim", "4", "--degree", "5", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // pass at the claimed degree
    let ok = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // bumping the degree claim must fail and name a monomial
    let bump = bin()
        .arg("verify")
        .arg(&path)
        .args(["--degree", "6"])
        .output()
        .unwrap();
    assert_eq!(bump.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bump.stdout).contains("worst-monomial"));

    // corrupting a coordinate must fail
    let text = std::fs::read_to_string(&path).unwrap();
    let corrupted = text.replacen("0.", "1.", 1);
    std::fs::write(&path, corrupted).unwrap();
    let bad = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_reports_parse_errors_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cub");
    std::fs::write(&path, "cubature-formula 1\nnot a header\n").unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn oa_emits_header_and_digit_rows() {
    let out = bin()
        .args(["oa", "--q", "2", "--m", "4", "--strength", "5", "--family", "kerdock"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "2 16 256 5");
    let first = lines.next().unwrap();
    assert_eq!(first.len(), 16);
    assert!(first.chars().all(|c| c == '0' || c == '1'));
    assert_eq!(stdout.lines().count(), 257);
}

#[test]
fn quad_convolutional_prints_offsets() {
    let out = bin()
        .args(["quad", "--kind", "convolutional", "--s", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("degree 7"));
    let offsets: Vec<f64> = stdout
        .lines()
        .find(|l| l.starts_with("offsets "))
        .unwrap()
        .split_ascii_whitespace()
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    for (got, want) in offsets.iter().zip([0.500128, 0.243941, 0.153942]) {
        assert!((got - want).abs() < 5e-6, "{got} vs {want}");
    }
}

#[test]
fn bounds_prints_paper_values() {
    let out = bin()
        .args(["bounds", "--dim", "100", "--degree", "5", "--symmetric"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("tchakaloff 96560646"));
    assert!(stdout.contains("tchakaloff-symmetric 8852652"));
    assert!(stdout.contains("exact-determination 87651"));
    assert!(stdout.contains("stroud-lower-dim 5151"));
    assert!(stdout.contains("stroud-lower-homogeneous 5050"));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().args(["generate", "--region", "nowhere"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cub");
    let gen = bin()
        .args(["generate", "--region", "cube", "--dim", "3", "--degree", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(gen.status.code(), Some(0));
    let out = bin()
        .arg("verify")
        .arg(&path)
        .args(["--strategy", "exhaustive"])
        .env("CUBATURE_OP_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn infeasible_exits_3() {
    // gaussian requires odd degree on the product path
    let out = bin()
        .args(["generate", "--region", "gaussian", "--dim", "4", "--degree", "7", "--q", "5"])
        .output()
        .unwrap();
    // q=5 cannot carry a degree-7 equal-weight rule; the probe is bypassed
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
