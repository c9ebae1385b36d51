use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn uvf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uvf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = uvf(&[
            "synth",
            "--seed",
            "7",
            "--count",
            "3",
            "--out-dir",
            path(dir),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (fa, fb) = (files(&a), files(&b));
    assert_eq!(fa.len(), 1 + 3 * 4);
    assert_eq!(fa, fb);
}

#[test]
fn bench_reports_the_proportions_row_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = uvf(&[
            "bench",
            "--count",
            "500",
            "--seed",
            "1",
            "--out-dir",
            path(dir),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let report = fs::read_to_string(a.join("report.txt")).unwrap();
    let header = report.lines().next().unwrap();
    let cols: Vec<&str> = header
        .strip_prefix("Data Proportion")
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(cols, ["0.1", "0.3", "0.5", "0.7", "0.9", "0.95"]);
    let csv = fs::read_to_string(a.join("report.csv")).unwrap();
    assert!(csv.starts_with("proportion,error_px,method\n"));
    let cumulative = fs::read_to_string(a.join("cumulative.csv")).unwrap();
    // header + baseline and three noise levels, 500 rows each
    assert_eq!(cumulative.lines().count(), 1 + 4 * 500);
    assert_eq!(files(&a), files(&b));
}

#[test]
fn walk_on_corrupted_grid_names_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("broken.uvfg");
    fs::write(
        &bad,
        b"XXXX\x01\x00\x01\x02\x02\x00\x00\x00\x02\x00\x00\x00",
    )
    .unwrap();
    let out = uvf(&[
        "walk",
        "--uvf",
        path(&bad),
        "--seed-point",
        "1,1",
        "--out",
        path(&tmp.path().join("c.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(path(&bad)), "{err}");
    assert!(err.contains("format error at byte offset 0"), "{err}");
    assert!(!tmp.path().join("c.json").exists());
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    let out = uvf(&["walk", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(uvf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(uvf(&["bench", "--mode", "diagonal"]).status.code(), Some(2));
    assert_eq!(uvf(&["--help"]).status.code(), Some(0));
}

#[test]
fn targets_walk_eval_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = tmp.path().join("lm.json");
    fs::write(
        &doc,
        r#"{
  "schema_version": 1,
  "image": { "width": 160, "height": 120 },
  "contours": [
    { "side": "left", "vertices": [[30.0, 30.0], [70.0, 45.0], [110.0, 40.0]], "annotator": "x" }
  ],
  "study": "synthetic"
}"#,
    )
    .unwrap();
    let tdir = tmp.path().join("t");
    let out = uvf(&[
        "targets",
        "--landmarks",
        path(&doc),
        "--out-dir",
        path(&tdir),
        "--mode",
        "segment",
        "--k",
        "0.02",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let targets = fs::read_to_string(tdir.join("targets.json")).unwrap();
    assert!(targets.contains("\"annotator\": \"x\""));
    assert!(targets.contains("\"study\": \"synthetic\""));

    let walked = tmp.path().join("w.json");
    let png = tmp.path().join("w.png");
    let out = uvf(&[
        "walk",
        "--uvf",
        path(&tdir.join("contour0_left_uvf.uvfg")),
        "--start",
        path(&tdir.join("contour0_left_start.uvfg")),
        "--end",
        path(&tdir.join("contour0_left_end.uvfg")),
        "--side",
        "left",
        "--step",
        "0.5",
        "--out",
        path(&walked),
        "--overlay",
        path(&png),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(fs::read_to_string(&walked).unwrap().contains("reached_end"));
    assert_eq!(&fs::read(&png).unwrap()[1..4], b"PNG");

    let csv = tmp.path().join("r.csv");
    let out = uvf(&[
        "eval",
        "--pred",
        path(&walked),
        "--gt",
        path(&doc),
        "--direction",
        "sym",
        "--out",
        path(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("proportion,error_px"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (q, e) = l.split_once(',').unwrap();
            (q.parse().unwrap(), e.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|&(_, e)| e < 2.0), "{rows:?}");

    let cmp = tmp.path().join("cmp.csv");
    let out = uvf(&[
        "eval",
        "--pred",
        path(&walked),
        "--gt",
        path(&doc),
        "--baseline",
        path(&doc),
        "--out",
        path(&cmp),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&cmp).unwrap();
    assert!(text.starts_with("proportion,error_px,method\n"));
    assert!(text.contains(",baseline\n") && text.contains(",uvf\n"));
}

#[test]
fn render_writes_png() {
    let tmp = tempfile::tempdir().unwrap();
    let scenes = tmp.path().join("s");
    assert!(uvf(&[
        "synth",
        "--seed",
        "2",
        "--count",
        "1",
        "--kind",
        "circle",
        "--out-dir",
        path(&scenes)
    ])
    .status
    .success());
    let png = tmp.path().join("r.png");
    let scene = scenes.join("scene_0000");
    let out = uvf(&[
        "render",
        "--out",
        path(&png),
        "--uvf",
        path(&scene.join("uvf.uvfg")),
        "--gt",
        path(&scene.join("landmarks.json")),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(&fs::read(&png).unwrap()[1..4], b"PNG");
    let missing = uvf(&[
        "render",
        "--out",
        path(&png),
        "--uvf",
        path(&tmp.path().join("nope.uvfg")),
    ]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.uvfg"));
}
