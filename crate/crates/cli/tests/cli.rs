use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn pose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pose")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn info_describes_fixture() {
    let out = pose(&["info", path(&fixtures().join("openpose_137.pose"))]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("components: 4"), "{text}");
    assert!(text.contains("points: 137"), "{text}");
    assert!(text.contains("frames: 3"), "{text}");
    assert!(text.contains("BODY_25 (XYC): 25 points"), "{text}");
}

#[test]
fn convert_reproduces_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for (input, name) in [("openpose", "dir.pose"), ("openpose_monolithic.json", "file.pose")] {
        let out_path = dir.path().join(name);
        let out = pose(&[
            "convert",
            "--from",
            "openpose",
            "--input",
            path(&fixtures().join(input)),
            "--fps",
            "25",
            "--width",
            "640",
            "--height",
            "480",
            "--max-people",
            "2",
            "--out",
            path(&out_path),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(
            std::fs::read(&out_path).unwrap(),
            std::fs::read(fixtures().join("openpose_137.pose")).unwrap()
        );
    }
}

#[test]
fn normalize_and_unknown_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixtures().join("openpose_137.pose");
    let out_path = dir.path().join("n.pose");
    let out = pose(&[
        "normalize",
        "--left",
        "BODY_25:LShoulder",
        "--right",
        "BODY_25:RShoulder",
        "--in",
        path(&input),
        "--out",
        path(&out_path),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out_path.exists());

    let out = pose(&[
        "normalize",
        "--left",
        "BODY_25:LeftShoulder",
        "--right",
        "BODY_25:RShoulder",
        "--in",
        path(&input),
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("BODY_25:LeftShoulder"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pose(&["render", "--in", "x.pose"]).status.code(), Some(2));
    assert_eq!(pose(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_1() {
    let out = pose(&["info", "/nonexistent/file.pose"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn augment_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"steps": [{"op": "rotate", "angle": 0.1}, {"op": "noise", "stddev": 1.0, "seed": 4},
                     {"op": "interpolate", "fps": 50}]}"#,
    )
    .unwrap();
    let augmented = dir.path().join("a.pose");
    let out = pose(&[
        "augment",
        "--spec",
        path(&spec),
        "--in",
        path(&fixtures().join("openpose_137.pose")),
        "--out",
        path(&augmented),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&pose(&["info", path(&augmented)])).contains("frames: 5"));

    let gif = dir.path().join("a.gif");
    let frames = dir.path().join("frames");
    let out = pose(&[
        "render",
        "--in",
        path(&augmented),
        "--gif",
        path(&gif),
        "--frames",
        path(&frames),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(&std::fs::read(&gif).unwrap()[..6], b"GIF89a");
    assert_eq!(std::fs::read_dir(&frames).unwrap().count(), 5);
}

#[test]
fn bench_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bench.json");
    let out = pose(&["bench", "--frames-list", "1", "--reps", "2", "--out", path(&report)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 2);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    for key in [
        "frames",
        "json_bytes",
        "json_parse_secs",
        "pose_bytes",
        "pose_read_secs",
        "pose_body_read_secs",
        "size_ratio",
        "speed_ratio",
    ] {
        assert!(rows[0][key].as_f64().is_some_and(|v| v > 0.0), "{key}");
    }
}
