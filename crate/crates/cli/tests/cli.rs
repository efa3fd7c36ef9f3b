use std::path::Path;
use std::process::{Command, Output};

fn lcseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn find_poly_small_fields() {
    let o = lcseq(&["find-poly", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("a = 1\nb = 1"));
    let o = lcseq(&["find-poly", "2"]);
    assert!(stdout(&o).contains("a = 1\nb = 2"));
    assert_eq!(
        stdout(&lcseq(&["find-poly", "5"])),
        stdout(&lcseq(&["find-poly", "5"]))
    );
}

#[test]
fn generate_json_and_csv() {
    let o = lcseq(&["generate", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let seqs = v["sequences"].as_array().unwrap();
    assert_eq!(seqs.len(), 31);
    assert!(seqs.iter().all(|s| s.as_array().unwrap().len() == 33));
    for key in [
        "n",
        "q",
        "modulus",
        "a",
        "b",
        "length",
        "family_size",
        "bound",
        "reps",
        "orbit",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let o = lcseq(&["generate", "1", "--format", "csv"]);
    let rows: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    assert_eq!(rows, vec!["-1,-1,+1"]);
}

#[test]
fn generate_then_analyze_file() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["json", "csv", "seqbin"] {
        let path = dir.path().join(format!("f.{fmt}"));
        let o = lcseq(&["generate", "5", "--format", fmt, "--out", path_str(&path)]);
        assert!(o.status.success());
        let o = lcseq(&["analyze", path_str(&path)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["cor"], 11);
        assert_eq!(v["bound"], 11);
        assert_eq!(v["within_bound"], true);
        assert!(v["argmax"]["kind"].is_string());
        assert!(v["balance_histogram"].is_object());
    }
}

#[test]
fn analyze_inline() {
    let v: serde_json::Value =
        serde_json::from_slice(&lcseq(&["analyze", "--n", "7"]).stdout).unwrap();
    assert_eq!(
        (v["cor"].as_u64(), v["bound"].as_u64()),
        (Some(21), Some(21))
    );
}

#[test]
fn byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "1"] {
        let fam = dir
            .path()
            .join(format!("fam{threads}{}.bin", outputs.len()));
        let rep = dir
            .path()
            .join(format!("rep{threads}{}.json", outputs.len()));
        assert!(lcseq(&[
            "--threads",
            threads,
            "generate",
            "6",
            "--format",
            "seqbin",
            "--out",
            path_str(&fam)
        ])
        .status
        .success());
        assert!(lcseq(&[
            "analyze",
            path_str(&fam),
            "--out",
            path_str(&rep),
            "--threads",
            threads
        ])
        .status
        .success());
        outputs.push((std::fs::read(&fam).unwrap(), std::fs::read(&rep).unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn table2_rows() {
    let o = lcseq(&["table2", "5", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("32,33,31,11,11,"));
    assert!(out.contains("64,65,63,15,15,"));
    assert!(out.contains("128,129,127,21,21,"));
    assert!(out.contains("modulus"));
}

#[test]
fn gold_summary() {
    let out = stdout(&lcseq(&["gold", "5"]));
    assert!(out.contains("length = 31"));
    assert!(out.contains("family_size = 33"));
    assert!(out.contains("max_correlation = 9"));
    assert_eq!(lcseq(&["gold", "4"]).status.code(), Some(1));
}

#[test]
fn verify_passes_and_detects_corruption() {
    for n in ["2", "5"] {
        let o = lcseq(&["verify", n]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    assert!(
        lcseq(&["generate", "4", "--format", "csv", "--out", path_str(&path)])
            .status
            .success()
    );
    assert_eq!(
        lcseq(&["verify", "--file", path_str(&path)]).status.code(),
        Some(0)
    );

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row = lines.iter_mut().find(|l| !l.starts_with('#')).unwrap();
    *row = if row.starts_with("+1") {
        row.replacen("+1", "-1", 1)
    } else {
        row.replacen("-1", "+1", 1)
    };
    std::fs::write(&path, lines.join("\n")).unwrap();
    let o = lcseq(&["verify", "--file", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));

    std::fs::write(&path, b"LCS1\x01garbage").unwrap();
    assert_eq!(
        lcseq(&["verify", "--file", path_str(&path)]).status.code(),
        Some(2)
    );
}

#[test]
fn validation_errors_exit_one() {
    let o = lcseq(&["generate", "2", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(
        lcseq(&["generate", "3", "--modulus", "0b1111"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(lcseq(&["generate", "17"]).status.code(), Some(1));
    assert_eq!(lcseq(&["generate", "2", "--a", "1"]).status.code(), Some(1));
    assert_eq!(lcseq(&["analyze", "--n", "11"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3}").unwrap();
    assert_eq!(lcseq(&["analyze", path_str(&bad)]).status.code(), Some(1));
}
