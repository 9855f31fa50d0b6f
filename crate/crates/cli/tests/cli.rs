use std::path::Path;
use std::process::{Command, Output};

use underrelax::output::{read_point_rows, read_sweep_rows};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_underrelax")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("temp paths are UTF-8")
}

fn assert_valid_svg(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert_eq!(doc.root_element().attribute("width"), Some("800"));
    assert_eq!(doc.root_element().attribute("height"), Some("600"));
}

#[test]
fn sweep_k12_oscillates_and_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg, gallery) = (dir.path().join("s.csv"), dir.path().join("s.svg"), dir.path().join("g.svg"));
    let out = run(&[
        "counterexample-sweep",
        "--K",
        "12",
        "--out-csv",
        path_str(&csv),
        "--out-svg",
        path_str(&svg),
        "--gallery-svg",
        path_str(&gallery),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_sweep_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 20);
    let heights: Vec<f64> = rows.iter().map(|r| r.height.unwrap()).collect();
    let alternations: usize = (0..2)
        .map(|o| {
            let seq: Vec<f64> = heights.iter().skip(o).step_by(2).copied().collect();
            seq.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
        })
        .sum();
    assert!(alternations >= 8, "{alternations}");
    assert_valid_svg(&svg);
    assert_valid_svg(&gallery);
}

#[test]
fn tiny_model_warns_and_fails_witness() {
    let out = run(&["counterexample-sweep", "--K", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("K too small"));
}

#[test]
fn fixed_epsilon_matches_prediction() {
    let out = run(&["counterexample-sweep", "--K", "40", "--epsilon", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find(|l| l.starts_with("eps=0.5")).unwrap();
    let field = |key: &str| -> f64 {
        let rest = &line[line.find(key).unwrap() + key.len()..];
        rest.split(|c: char| c == ' ' || c == ')').next().unwrap().parse().unwrap()
    };
    assert!((field("height=") - field("predicted height ")).abs() < 1e-7, "{line}");
}

#[test]
fn identical_inputs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for n in 0..2 {
        let sweep = dir.path().join(format!("sweep{n}.csv"));
        let ex = dir.path().join(format!("ex{n}.csv"));
        assert!(run(&["counterexample-sweep", "--K", "12", "--eps-min", "0.2", "--eps-steps", "6", "--out-csv", path_str(&sweep)])
            .status
            .success());
        assert!(run(&["example1", "--loops", "50", "--out-csv", path_str(&ex)]).status.success());
        files.push((std::fs::read(&sweep).unwrap(), std::fs::read(&ex).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn example1_stays_in_start_planes() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("e.csv"), dir.path().join("e.svg"));
    let out = run(&[
        "example1",
        "--epsilon",
        "0.75,0.25",
        "--start",
        "1.5,-1,0.5",
        "--start",
        "-3,4,-0.75",
        "--out-csv",
        path_str(&csv),
        "--out-svg",
        path_str(&svg),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_point_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    for r in &rows {
        let z = r.point.z();
        assert!(z == 0.5 || z == -0.75, "{r:?}");
    }
    assert_valid_svg(&svg);
}

#[test]
fn lambda_run_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("l.csv"), dir.path().join("l.svg"));
    let out = run(&[
        "lambda-run",
        "--K",
        "12",
        "--schedule",
        "const:0.5:100,harmonic:1:50",
        "--start",
        "-2,-3,4",
        "--record-every",
        "10",
        "--out-csv",
        path_str(&csv),
        "--out-svg",
        path_str(&svg),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read(&csv).unwrap();
    let rows = read_point_rows(&text[..]).unwrap();
    assert_eq!(rows.len(), 1 + 15 * 3);
    let mut again = Vec::new();
    underrelax::output::write_point_rows(&mut again, &rows).unwrap();
    assert_eq!(again, text);
    assert_valid_svg(&svg);
}

#[test]
fn contact_table_and_least_squares() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = run(&["epsilon-of-contact", "--K", "12", "--per-segment", "2", "--out-csv", path_str(&csv)]);
    assert!(out.status.success());
    let rows = read_sweep_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 22);
    assert!(rows.windows(2).all(|w| w[1].epsilon < w[0].epsilon));

    let out = run(&["least-squares", "--start", "-7,4,9", "--start", "3,-2,0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
}

#[test]
fn verify_passes_and_mutation_fails() {
    let out = run(&["verify", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| l.contains("\"pass\":true")));

    let out = run(&["verify", "--mutate", "epsilon-formula"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("counterexample.epsilon_monotonicity"));
}

#[test]
fn bad_configuration_exits_nonzero() {
    assert_eq!(run(&["example1", "--epsilon", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["lambda-run", "--schedule", ""]).status.code(), Some(2));
    assert_eq!(run(&["counterexample-sweep", "--K", "12", "--tol", "0"]).status.code(), Some(2));
}
