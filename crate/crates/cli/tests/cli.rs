//! End-to-end checks of the command-line surface.

use std::path::Path;
use std::process::{Command, Output};

fn xoptlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xoptlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("missing field {key} in {text:?}"))
        .to_string()
}

#[test]
fn gen_round_trips_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = xoptlab(
        &[
            "gen", "--kind", "uniform", "--n", "50", "--seed", "9", "--out", "a.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let again = xoptlab(
        &[
            "gen", "--kind", "uniform", "--n", "50", "--seed", "9", "--out", "b.txt",
        ],
        dir.path(),
    );
    assert!(again.status.success());
    let a = std::fs::read_to_string(dir.path().join("a.txt")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.txt")).unwrap();
    assert_eq!(a, b);

    // load → rewrite is the identity
    let inst = xoptlab_core::tour::Instance::read_file(&dir.path().join("a.txt")).unwrap();
    assert_eq!(inst.to_text(), a);
}

#[test]
fn worstcase_pipeline_verifies_noncrossing() {
    let dir = tempfile::tempdir().unwrap();
    let out = xoptlab(
        &[
            "gen",
            "--kind",
            "worstcase",
            "--n",
            "10",
            "--eps",
            "0.1",
            "--out",
            "w.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let verify = xoptlab(
        &["verify", "--instance", "w.txt", "--tour", "w.txt.bad.tour"],
        dir.path(),
    );
    assert!(verify.status.success());
    let text = stdout(&verify);
    assert_eq!(field(&text, "crossings"), "0");
    let len: f64 = field(&text, "length").parse().unwrap();
    assert!(len >= 2f64.sqrt() * 10.0 * 0.95);
}

#[test]
fn solve_on_noncrossing_start_does_nothing() {
    // identity order over convex-position points is already noncrossing
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("sq.txt"), "4\n0 0\n1 0\n1 1\n0 1\n").unwrap();
    let solve = xoptlab(
        &[
            "solve",
            "--instance",
            "sq.txt",
            "--heuristic",
            "xopt",
            "--start",
            "identity",
        ],
        dir.path(),
    );
    assert!(solve.status.success(), "{solve:?}");
    let text = stdout(&solve);
    assert_eq!(field(&text, "iterations"), "0");
    assert_eq!(field(&text, "final_crossings"), "0");
}

#[test]
fn solve_untangles_a_crossing_start() {
    // square corners in diagonal order: the identity tour crosses once and
    // a single exchange yields the perimeter
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("diag.txt"), "4\n0 0\n1 1\n1 0\n0 1\n").unwrap();
    let solve = xoptlab(
        &[
            "solve",
            "--instance",
            "diag.txt",
            "--heuristic",
            "xopt",
            "--start",
            "identity",
            "--tour-out",
            "out.tour",
        ],
        dir.path(),
    );
    assert!(solve.status.success(), "{solve:?}");
    let text = stdout(&solve);
    assert_eq!(field(&text, "iterations"), "1");
    assert_eq!(field(&text, "final_crossings"), "0");
    let len: f64 = field(&text, "final_length").parse().unwrap();
    assert!((len - 4.0).abs() < 1e-9);
}

#[test]
fn counterexample_oracle_agrees_with_verify() {
    let dir = tempfile::tempdir().unwrap();
    xoptlab(
        &[
            "gen",
            "--kind",
            "counterexample",
            "--bigl",
            "100",
            "--out",
            "ce.txt",
        ],
        dir.path(),
    );
    let t_len: f64 = field(
        &stdout(&xoptlab(
            &[
                "verify",
                "--instance",
                "ce.txt.without_x",
                "--tour",
                "ce.txt.tour_t.tour",
            ],
            dir.path(),
        )),
        "length",
    )
    .parse()
    .unwrap();
    let longest: f64 = field(
        &stdout(&xoptlab(
            &[
                "oracle",
                "--instance",
                "ce.txt",
                "--mode",
                "longest-noncrossing",
            ],
            dir.path(),
        )),
        "length",
    )
    .parse()
    .unwrap();
    assert!(
        longest < t_len,
        "longest noncrossing {longest} not below l(T) {t_len}"
    );
}

#[test]
fn oracle_modes_on_a_small_instance() {
    let dir = tempfile::tempdir().unwrap();
    xoptlab(
        &[
            "gen", "--kind", "uniform", "--n", "7", "--seed", "3", "--out", "u.txt",
        ],
        dir.path(),
    );
    let enumerate = stdout(&xoptlab(
        &["oracle", "--instance", "u.txt", "--mode", "enumerate"],
        dir.path(),
    ));
    assert_eq!(field(&enumerate, "tours"), "360");
    let optimal: f64 = field(
        &stdout(&xoptlab(
            &["oracle", "--instance", "u.txt", "--mode", "optimal"],
            dir.path(),
        )),
        "optimal_length",
    )
    .parse()
    .unwrap();
    let min: f64 = field(&enumerate, "min_length").parse().unwrap();
    assert!((optimal - min).abs() < 1e-9);
}

#[test]
fn identical_flags_produce_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    xoptlab(
        &[
            "gen", "--kind", "uniform", "--n", "60", "--seed", "5", "--out", "u.txt",
        ],
        dir.path(),
    );
    let run = || {
        stdout(&xoptlab(
            &[
                "solve",
                "--instance",
                "u.txt",
                "--heuristic",
                "twoopt",
                "--start",
                "random",
                "--seed",
                "11",
            ],
            dir.path(),
        ))
    };
    assert_eq!(run(), run());
}

#[test]
fn error_paths_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // missing seed for a random start
    xoptlab(
        &[
            "gen", "--kind", "uniform", "--n", "10", "--seed", "1", "--out", "u.txt",
        ],
        dir.path(),
    );
    let no_seed = xoptlab(
        &[
            "solve",
            "--instance",
            "u.txt",
            "--heuristic",
            "xopt",
            "--start",
            "random",
        ],
        dir.path(),
    );
    assert!(!no_seed.status.success());
    assert!(!String::from_utf8_lossy(&no_seed.stderr).is_empty());

    // missing seed for uniform gen
    let no_gen_seed = xoptlab(
        &["gen", "--kind", "uniform", "--n", "10", "--out", "v.txt"],
        dir.path(),
    );
    assert!(!no_gen_seed.status.success());

    // malformed instance file
    std::fs::write(dir.path().join("broken.txt"), "3\n0 0\n").unwrap();
    let broken = xoptlab(
        &["verify", "--instance", "broken.txt", "--tour", "u.txt"],
        dir.path(),
    );
    assert!(!broken.status.success());

    // odd n for the worst-case family
    let odd = xoptlab(
        &[
            "gen",
            "--kind",
            "worstcase",
            "--n",
            "9",
            "--eps",
            "0.1",
            "--out",
            "w.txt",
        ],
        dir.path(),
    );
    assert!(!odd.status.success());

    // unknown flag
    let unknown = xoptlab(&["gen", "--nope"], dir.path());
    assert!(!unknown.status.success());
}

#[test]
fn experiment_and_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "n_values": [30, 50],
        "samples_per_n": 4,
        "master_seed": 7,
        "mode": "x_opt_ratio",
        "output_path": dir.path().join("r.csv"),
        "workers": 2,
    });
    std::fs::write(dir.path().join("cfg.json"), cfg.to_string()).unwrap();
    let exp = xoptlab(&["experiment", "--config", "cfg.json"], dir.path());
    assert!(exp.status.success(), "{exp:?}");
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9); // header + 8 records

    let plot = xoptlab(&["plot", "--csv", "r.csv", "--out", "r.svg"], dir.path());
    assert!(plot.status.success(), "{plot:?}");
    let svg = std::fs::read_to_string(dir.path().join("r.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("</svg>"));
}
