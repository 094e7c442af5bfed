use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use algmatch::field::PrimeField;
use algmatch::gen::complete_graphic;
use algmatch::linalg::Matrix;
use algmatch_cli::format::write_matroid;
use algmatch_cli::RunReport;
use tempfile::TempDir;

fn algmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algmatch")).args(args).output().expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

const PATH_BPM: &str = "# a0 - s0 - s1 - b0\nbpm 1 1 2 2147483647\nQ1\n1\nQ2\n1\ne a0 s0\ne s0 s1\ne s1 b0\n";

#[test]
fn match_square() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "c4.txt", "graph 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n");
    let out = algmatch(&["--json", "--oracle", "match", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!((r.size, r.verified, r.oracle_size), (2, true, Some(2)));
    let text = algmatch(&["match", s(&g)]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("match: size 2"));
}

#[test]
fn match_empty_graph() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "e.txt", "graph 5\n");
    let r = report(&algmatch(&["--json", "match", s(&g)]));
    assert_eq!(r.size, 0);
    assert!(r.verified);
}

#[test]
fn same_seed_same_json() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.txt", "graph 6\ne 0 1\ne 1 2\ne 2 0\ne 2 3\ne 3 4\ne 4 5\ne 5 3\n");
    let run = || {
        let mut r = report(&algmatch(&["--json", "--seed", "7", "match", s(&g)]));
        r.wall_time_ms = 0.0;
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn intersect_identity_and_graphic() {
    let dir = TempDir::new().unwrap();
    let f = PrimeField::default();
    let eye = file(&dir, "i.txt", &write_matroid(&Matrix::identity(f, 3)));
    let r = report(&algmatch(&["--json", "intersect", s(&eye), s(&eye)]));
    assert_eq!(r.size, 3);
    let k4 = file(&dir, "k4.txt", &write_matroid(&complete_graphic(f, 4)));
    for alg in ["alg1", "alg2", "oracle"] {
        let r = report(&algmatch(&["--json", "--oracle", "intersect", s(&k4), s(&k4), "--algorithm", alg]));
        assert_eq!(r.size, 3, "{alg}");
        assert_eq!(r.algorithm.as_deref(), Some(alg));
    }
}

#[test]
fn intersect_mismatched_primes() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "matroid 1 2 101\n1 1\n");
    let b = file(&dir, "b.txt", "matroid 1 2 103\n1 1\n");
    assert_eq!(algmatch(&["intersect", s(&a), s(&b)]).status.code(), Some(4));
}

#[test]
fn bpm_commands() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "p.txt", PATH_BPM);
    let r = report(&algmatch(&["--json", "--oracle", "bpm", s(&p)]));
    assert_eq!(r.size, 3);
    assert_eq!(r.exists, Some(true));
    let r = report(&algmatch(&["--json", "bpm", "--exists-only", s(&p)]));
    assert_eq!(r.exists, Some(true));

    let edgeless = file(&dir, "x.txt", "bpm 0 0 2 2147483647\nQ1\nQ2\n");
    let out = algmatch(&["--json", "bpm", s(&edgeless)]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r.exists, Some(false));
    assert!(!r.verified);
}

#[test]
fn parse_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.txt", "graph 3\ne 0 7\n");
    let out = algmatch(&["match", s(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(algmatch(&["match", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn no_verify_still_succeeds() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.txt", "graph 3\ne 0 1\ne 1 2\n");
    let out = algmatch(&["--json", "--no-verify", "match", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).size, 1);
}

#[test]
fn bench_csv() {
    let out = algmatch(&["bench", "alg2", "--sizes", "32,64", "--r", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,r,algorithm,field_mul_count,wall_time_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("32,4,alg2,"));
    let empty = algmatch(&["bench", "matching"]);
    assert_eq!(String::from_utf8(empty.stdout).unwrap(), "n,r,algorithm,field_mul_count,wall_time_ms\n");
}
