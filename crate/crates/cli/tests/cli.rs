use std::fs;
use std::process::Command;

use serde_json::Value;

fn tropbetti(args: &[&str], dir: &std::path::Path) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropbetti"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        json,
        String::from_utf8_lossy(&out.stderr).to_string(),
    )
}

#[test]
fn quintic_pipeline_archive() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("quintic.json"),
        r#"{"polytope": "quintic", "divisor": {"construct": {"basepoint": 0}}, "output_dir": "archive"}"#,
    )
    .unwrap();
    let (code, summary, err) = tropbetti(&["pipeline", "-c", "quintic.json"], dir.path());
    assert_eq!(code, 0, "{err}");
    assert_eq!(summary["b1"], 101);
    let betti: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("archive/betti.json")).unwrap())
            .unwrap();
    assert_eq!(betti["connected"], "connected");
    assert_eq!(betti["formula_used"], "h^{n-1,1}+h^{1,1}-1");
    let text = fs::read_to_string(dir.path().join("archive/summary.txt")).unwrap();
    assert!(text.contains("b1 = 101"));
    assert!(dir.path().join("archive/construction.json").is_file());
}

#[test]
fn cube_zero_divisor_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"polytope": "cube:4/dual", "divisor": "empty", "output_dir": "out"}"#,
    )
    .unwrap();
    let (code, summary, err) = tropbetti(&["pipeline", "-c", "c.json"], dir.path());
    assert_eq!(code, 0, "{err}");
    assert_eq!(summary["connected"], "two_components");
    assert_eq!(summary["b1"], 72);
}

#[test]
fn bad_config_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"polytope": "cube:4", "divisor": "empty", "output_dir": "o", "sede": 1}"#,
    )
    .unwrap();
    let (code, _, err) = tropbetti(&["pipeline", "-c", "bad.json"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("sede"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = tropbetti(&["construct-divisor", "-p", "p2xp2"], dir.path());
    assert_eq!(code, 3);
    let (code, _, _) = tropbetti(&["dualize", "-p", "dodecahedron"], dir.path());
    assert_eq!(code, 2);
    // a triangulation missing a simplex
    let (code, t, _) = tropbetti(&["triangulate", "-p", "cube:2"], dir.path());
    assert_eq!(code, 0);
    let mut broken = t.clone();
    broken["boundary_simplices"].as_array_mut().unwrap().pop();
    fs::write(dir.path().join("t.json"), broken.to_string()).unwrap();
    let (code, report, _) = tropbetti(
        &["validate", "-p", "cube:2", "--triangulation", "t.json"],
        dir.path(),
    );
    assert_eq!(code, 2);
    assert_eq!(report["triangulation"]["covering"], false);
}

#[test]
fn mirror_check_and_cohomology() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = tropbetti(&["mirror-check", "-p", "cube:3"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(r["pass"], true);
    let (_, r, _) = tropbetti(
        &["cohomology", "-p", "simplex:2", "--side", "X"],
        dir.path(),
    );
    assert_eq!(r["X"]["dims"], serde_json::json!([[1, 1], [1, 1]]));
    assert!(r.get("Xmirror").is_none());
}

#[test]
fn divisor_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (code, g, _) = tropbetti(
        &["construct-divisor", "-p", "cube:4", "--basepoint", "5"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(g["hypothesis"], "even_edges");
    assert_eq!(g["admissibility"]["admissible"], true);
    fs::write(dir.path().join("d.json"), g["divisor"].to_string()).unwrap();
    let (code, r, _) = tropbetti(
        &["admissible", "-p", "cube:4", "--divisor", "d.json"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(r["admissible"], true);
    let (_, strict, _) = tropbetti(
        &[
            "admissible",
            "-p",
            "cube:4",
            "--divisor",
            "d.json",
            "--strict-adjacency",
        ],
        dir.path(),
    );
    assert_eq!(strict["strict_adjacency"], true);
    let (_, c, _) = tropbetti(
        &[
            "classify",
            "-p",
            "cube:4",
            "--divisor",
            "d.json",
            "--vertex",
            "0",
            "--edge",
            "20",
        ],
        dir.path(),
    );
    assert_eq!(c["vertices"][0]["class"], "SimpleVertex");
    let (code, r, _) = tropbetti(&["cube-cup", "--n", "4", "--D", "10010"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(r["rank"], 4);
    assert_eq!(r["kernel_basis"], serde_json::json!([[1, 0, 0, 1, 0]]));
    let (code, _, _) = tropbetti(&["cube-cup", "--n", "4", "--D", "101"], dir.path());
    assert_eq!(code, 2);
}

#[test]
fn jobs_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tropbetti"))
        .args(["cohomology", "-p", "cube:3"])
        .env("TROPBETTI_JOBS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
}
