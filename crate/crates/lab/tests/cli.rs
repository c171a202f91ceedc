use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use meyers_core::mesh::{parse_mesh, parse_polygon, regularity_report};
use meyers_lab::{experiments, Experiment};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meyers-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL_GEOMETRY: &str = "experiment = geometry\nlevels = 3 4 5\nr0_cells = 6\n";

#[test]
fn help_documents_every_schema() {
    let out = lab(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for e in Experiment::ALL {
        assert!(text.contains(experiments::header(e)), "missing schema of {e}");
    }
    assert!(text.contains("Exit status"));
}

#[test]
fn passing_run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "geo.cfg", SMALL_GEOMETRY);
    let out = lab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let csv = std::fs::read_to_string(dir.path().join("geo.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
    assert!(csv.starts_with(experiments::header(Experiment::Geometry)));
    let summary = std::fs::read_to_string(dir.path().join("geo.summary.txt")).unwrap();
    assert_eq!(summary, stdout(&out));
    assert!(summary.contains("PASS doubling stability"));

    // the report command reaches the same verdicts from the CSV alone
    let rep = lab(&["report", dir.path().join("geo.csv").to_str().unwrap()]);
    assert_eq!(rep.status.code(), Some(0));
    assert!(stdout(&rep).ends_with(&summary));
}

#[test]
fn failing_verdict_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rate.cfg",
        "experiment = rate_theta\nlevels = 2 3 4\nreference_level = 6\ncenter_reference = 1\noutput = out/rate.csv\n",
    );
    std::fs::create_dir(dir.path().join("out")).unwrap();
    let out = lab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL center value"));
    assert!(dir.path().join("out/rate.csv").exists());
    let rep = lab(&["report", dir.path().join("out/rate.csv").to_str().unwrap()]);
    assert_eq!(rep.status.code(), Some(2));
}

#[test]
fn aborted_cells_are_listed_and_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    // a side of 0.375 is a multiple of 2^-3 but not of 2^-2
    let cfg = write_config(
        dir.path(),
        "abort.cfg",
        "experiment = meyers_sweep\ndomain = rectangle 0 0 1 0.375\ncoefficient = identity\nlevels = 2 3 4 5\n",
    );
    let out = lab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("ABORTED level 2"), "{text}");
    assert!(text.contains("PASS discrete identity"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("abort.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
}

#[test]
fn execution_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("range.cfg", "experiment = meyers_sweep\np = 1.5\n"),
        ("typo.cfg", "experiment = meyers_sweep\nlevles = 3 4\n"),
        ("kind.cfg", "experiment = holder_convergence\ncoefficient = marble\n"),
        ("syntax.cfg", "experiment = geometry\nlevels 3 4\n"),
    ] {
        let cfg = write_config(dir.path(), name, text);
        let out = lab(&["run", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{name}");
    }
    assert_eq!(lab(&["run", "/nonexistent/config"]).status.code(), Some(1));

    let bad = write_config(dir.path(), "bad.csv", "experiment,p\nmeyers_sweep,2.2\n");
    assert_eq!(lab(&["report", bad.to_str().unwrap()]).status.code(), Some(1));
    let ragged = write_config(
        dir.path(),
        "ragged.csv",
        &format!("{}\nmeyers_sweep,2.2\n", experiments::header(Experiment::MeyersSweep)),
    );
    assert_eq!(lab(&["report", ragged.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let text = "experiment = embeddings\nsizes = 6 8 10\nequivalence_sizes = 8 12\nsamples = 4\nseed = 11\n";
    let a = write_config(dir.path(), "a.cfg", text);
    let b = write_config(dir.path(), "b.cfg", text);
    assert!(lab(&["run", a.to_str().unwrap()]).status.code().is_some());
    assert!(lab(&["run", "--sequential", b.to_str().unwrap()]).status.code().is_some());
    let ca = std::fs::read(dir.path().join("a.csv")).unwrap();
    let cb = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!ca.is_empty());
    assert_eq!(ca, cb);
}

#[test]
fn mesh_command_prints_an_admissible_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let poly_text = "# pentagon\n0 0\n2 0\n2.5 1\n1 2\n-0.5 1\n";
    let poly = write_config(dir.path(), "pentagon.txt", poly_text);
    let out = lab(&["mesh", poly.to_str().unwrap(), "--h", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let tri = parse_mesh(&stdout(&out), parse_polygon(poly_text).unwrap()).unwrap();
    let report = regularity_report(&tri);
    assert!(report.admissible);
    assert!(report.h <= 0.3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("admissible = true"));

    assert_eq!(lab(&["mesh", poly.to_str().unwrap(), "--h=-1"]).status.code(), Some(1));
    assert_eq!(lab(&["mesh", poly.to_str().unwrap()]).status.code(), Some(1));
    let concave = write_config(dir.path(), "concave.txt", "0 0\n2 0\n1 0.3\n2 2\n0 2\n");
    assert_eq!(lab(&["mesh", concave.to_str().unwrap(), "--h", "0.3"]).status.code(), Some(1));
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("cfg") {
            continue;
        }
        let cfg = meyers_lab::Config::load(&path).unwrap();
        assert_eq!(cfg.experiment.name(), path.file_stem().unwrap().to_str().unwrap());
        seen.push(cfg.experiment);
    }
    seen.sort();
    assert_eq!(seen, Experiment::ALL.to_vec());
}
