//! End-to-end behaviour of the `intsep` binary: outputs and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use intsep_cli::io::{parse_instance, parse_timeline};
use intsep_cli::report::{HEADER, SCHEMA_LINE};
use tempfile::TempDir;

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .display()
        .to_string()
}

fn intsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch() -> (TempDir, impl Fn(&str) -> String) {
    let dir = tempfile::tempdir().unwrap();
    let root: PathBuf = dir.path().to_path_buf();
    (dir, move |name: &str| root.join(name).display().to_string())
}

#[test]
fn solve_writes_timeline_and_report_row() {
    let (_dir, p) = scratch();
    let out = intsep(&[
        "solve",
        &data("instances/golden.json"),
        "--timeline-out",
        &p("t.json"),
        "--report",
        &p("r.csv"),
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let inst = parse_instance(&std::fs::read_to_string(data("instances/golden.json")).unwrap()).unwrap();
    let tl = parse_timeline(&inst, &std::fs::read_to_string(p("t.json")).unwrap()).unwrap();
    assert_eq!(tl.length(), 2);
    let report = std::fs::read_to_string(p("r.csv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(&lines[..2], &[SCHEMA_LINE, HEADER]);
    let cells: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(
        &cells[..10],
        &["golden", "6", "13", "6", "4", "2", "1", "2.00", "2", "true"]
    );
    assert_eq!(&cells[11..], &["exact", "3"]);
}

#[test]
fn greedy_mode_is_no_better_than_exact() {
    let out = intsep(&["solve", &data("instances/golden.json"), "--mode", "greedy"]);
    assert_eq!(out.status.code(), Some(0));
    let inst = parse_instance(&std::fs::read_to_string(data("instances/golden.json")).unwrap()).unwrap();
    let tl = parse_timeline(&inst, &stdout(&out)).unwrap();
    assert!(tl.length() >= 2);
}

#[test]
fn malformed_instance_exits_one_with_location() {
    let (_dir, p) = scratch();
    std::fs::write(p("bad.json"), "{\n  \"version\": 1,\n  \"T\": six\n}\n").unwrap();
    let out = intsep(&["solve", &p("bad.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert_eq!(intsep(&["count", &p("missing.json")]).status.code(), Some(1));
    assert_eq!(
        intsep(&["solve", "--mode", "fast", &p("bad.json")]).status.code(),
        Some(1)
    );
}

#[test]
fn direct_arc_exits_two() {
    let (_dir, p) = scratch();
    let text = std::fs::read_to_string(data("instances/golden.json")).unwrap().replace(
        "\"arcs\": [",
        "\"arcs\": [\n    {\"u\": \"s\", \"v\": \"z\", \"times\": [2]},",
    );
    std::fs::write(p("direct.json"), text).unwrap();
    assert_eq!(intsep(&["solve", &p("direct.json")]).status.code(), Some(2));
    assert_eq!(
        intsep(&["solve", &p("direct.json"), "--mode", "greedy"]).status.code(),
        Some(2)
    );
}

#[test]
fn timeout_exits_three_and_still_writes_a_separator() {
    let (_dir, p) = scratch();
    let out = intsep(&[
        "solve",
        &data("instances/golden.json"),
        "--timeout",
        "0",
        "--timeline-out",
        &p("t.json"),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let verify = intsep(&["verify", &data("instances/golden.json"), &p("t.json")]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&out).contains("exact-incumbent"));
}

#[test]
fn verify_exit_codes() {
    let golden = data("instances/golden.json");
    assert_eq!(
        intsep(&["verify", &golden, &data("instances/golden_separator.json")])
            .status
            .code(),
        Some(0)
    );

    let (_dir, p) = scratch();
    let empty = "{\"s\": null, \"a\": null, \"b\": null, \"c\": null, \"f\": null, \"z\": null}";
    std::fs::write(p("empty.json"), empty).unwrap();
    let out = intsep(&["verify", &golden, &p("empty.json")]);
    assert_eq!(out.status.code(), Some(4));
    let trace = stdout(&out);
    assert!(trace.starts_with("s,(s"), "{trace}");
    assert!(trace.trim_end().ends_with(",z"), "{trace}");

    std::fs::write(p("on_s.json"), empty.replace("\"s\": null", "\"s\": [1, 2]")).unwrap();
    assert_eq!(intsep(&["verify", &golden, &p("on_s.json")]).status.code(), Some(1));
}

#[test]
fn count_reports_exact_or_walks() {
    let golden = data("instances/golden.json");
    assert_eq!(stdout(&intsep(&["count", &golden])).trim(), "2 exact");
    // a one-node budget cannot finish the search tree
    assert_eq!(stdout(&intsep(&["count", &golden, "--budget", "1"])).trim(), "2 walks");
    assert_eq!(intsep(&["count", &golden, "--budget", "0"]).status.code(), Some(1));
}

#[test]
fn reduce_encodes_cover43() {
    let (_dir, p) = scratch();
    let out = intsep(&[
        "reduce",
        &data("instances/cover43.setcover"),
        "--out",
        &p("i.json"),
        "--windows-out",
        &p("w.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let inst = parse_instance(&std::fs::read_to_string(p("i.json")).unwrap()).unwrap();
    assert_eq!(inst.graph().vertex_count(), 5);
    assert_eq!(inst.deadline(), 4);
    let windows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("w.json")).unwrap()).unwrap();
    assert_eq!(windows["big_m"], 1728);
    assert_eq!(windows["windows"].as_array().unwrap().len(), 4);
    assert_eq!(windows["windows"][2]["sets"], serde_json::json!([1]));

    std::fs::write(p("bad.setcover"), "3 2\n1 2\n1 2\n").unwrap();
    assert_eq!(intsep(&["reduce", &p("bad.setcover")]).status.code(), Some(1));
}

#[test]
fn generate_requires_a_seed_and_is_deterministic() {
    assert_eq!(intsep(&["generate"]).status.code(), Some(1));
    let tntp = data("tntp/EMA_net.tntp");
    let a = intsep(&["generate", "--tntp", &tntp, "--seed", "5"]);
    let b = intsep(&["generate", "--tntp", &tntp, "--seed", "5"]);
    let c = intsep(&["generate", "--tntp", &tntp, "--seed", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let inst = parse_instance(&stdout(&a)).unwrap();
    assert_eq!(
        (inst.graph().vertex_count(), inst.graph().horizon(), inst.deadline()),
        (74, 50, 25)
    );
}

#[test]
fn ingest_gtfs_bins_and_reports_missing_files() {
    let out = intsep(&["ingest-gtfs", &data("gtfs/mini"), "--trim"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let inst = parse_instance(&stdout(&out)).unwrap();
    assert!(inst.graph().horizon() <= 120);

    let coarse = parse_instance(&stdout(&intsep(&[
        "ingest-gtfs",
        &data("gtfs/mini"),
        "--bin-seconds",
        "300",
    ])))
    .unwrap();
    assert_eq!(coarse.graph().horizon(), 24);

    let (dir, _) = scratch();
    let out = intsep(&["ingest-gtfs", &dir.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("stops.txt"), "{}", stderr(&out));
}

#[test]
fn manifest_runs_append_one_row_per_instance() {
    let (_dir, p) = scratch();
    for seed in ["1", "2", "3"] {
        let name = format!("r{seed}.json");
        assert!(intsep(&["generate", "--seed", seed, "--out", &p(&name)])
            .status
            .success());
    }
    std::fs::write(
        p("manifest.txt"),
        "# small random instances\nr1.json\nr2.json\n\nr3.json\n",
    )
    .unwrap();
    std::fs::create_dir(p("timelines")).unwrap();
    let run = || {
        intsep(&[
            "solve",
            "--manifest",
            &p("manifest.txt"),
            "--timeline-dir",
            &p("timelines"),
            "--report",
            &p("report.csv"),
            "--jobs",
            "2",
        ])
    };
    assert_eq!(run().status.code(), Some(0));
    assert_eq!(run().status.code(), Some(0));
    let report = std::fs::read_to_string(p("report.csv")).unwrap();
    let datasets: Vec<&str> = report.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(datasets, ["r1", "r2", "r3", "r1", "r2", "r3"]);
    for seed in 1..=3 {
        let inst = parse_instance(&std::fs::read_to_string(p(&format!("r{seed}.json"))).unwrap()).unwrap();
        let tl = std::fs::read_to_string(p(&format!("timelines/r{seed}.timeline.json"))).unwrap();
        assert!(intsep::is_valid_separator(&inst, &parse_timeline(&inst, &tl).unwrap()));
    }
}
