use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hypaffine_cli::{
    run_args, EXIT_INPUT, EXIT_PASS, EXIT_RESOURCE, EXIT_VIOLATION, TIMESTAMP_KEY,
};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

/// Runs the command with `--out` pointing into a fresh directory.
fn run(args: &[&str]) -> (i32, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let mut full = vec!["hypaffine"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &out]);
    (run_args(full), dir)
}

fn body(dir: &Path, name: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(dir.join(format!("{name}.csv")))
        .unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn header_value(dir: &Path, name: &str, key: &str) -> Option<String> {
    let text = fs::read_to_string(dir.join(format!("{name}.csv"))).unwrap();
    let prefix = format!("# {key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}

#[test]
fn ball_sphere_counts() {
    let f2 = data("f2.txt");
    let (code, dir) = run(&["ball", "--presentation", &f2, "--radius", "3"]);
    assert_eq!(code, EXIT_PASS);
    let rows = body(dir.path(), "ball");
    let counts: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(counts, ["1", "4", "12", "36"]);
    assert_eq!(
        header_value(dir.path(), "ball", "seed").as_deref(),
        Some("0")
    );

    let (code, dir) = run(&["ball", "--presentation", &f2, "--radius", "0"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        body(dir.path(), "ball"),
        vec![vec!["0".to_string(), "1".to_string()]]
    );
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(
        run(&["ball", "--presentation", "/nonexistent/p.txt"]).0,
        EXIT_INPUT
    );
    assert_eq!(run(&["ball"]).0, EXIT_INPUT);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "generators: a b\nrelators: aX\nmode: dehn\n").unwrap();
    assert_eq!(
        run(&["ball", "--presentation", &bad.display().to_string()]).0,
        EXIT_INPUT
    );
    assert_eq!(run(&["ball", "--radius", "-1"]).0, EXIT_INPUT);
    assert_eq!(run(&["verify", "--bicombing", "geodesic"]).0, EXIT_INPUT);
}

#[test]
fn resource_caps_exit_three() {
    let surface = data("surface2.txt");
    let (code, _) = run(&[
        "ball",
        "--presentation",
        &surface,
        "--radius",
        "4",
        "--cap",
        "500",
    ]);
    assert_eq!(code, EXIT_RESOURCE);
    let (code, _) = run(&[
        "norms",
        "--presentation",
        &surface,
        "--radius",
        "3",
        "--index-radius",
        "2",
    ]);
    assert_eq!(code, EXIT_RESOURCE);
}

#[test]
fn bicombing_stats_rows() {
    let (code, dir) = run(&[
        "bicombing-stats",
        "--presentation",
        &data("f2.txt"),
        "--radius",
        "4",
    ]);
    assert_eq!(code, EXIT_PASS);
    let rows = body(dir.path(), "bicombing_stats");
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][0].as_str(), rows[0][1].as_str()), ("tree", "0"));

    let (code, dir) = run(&[
        "bicombing-stats",
        "--presentation",
        &data("surface2.txt"),
        "--radius",
        "2",
    ]);
    assert_eq!(code, EXIT_PASS);
    let rows = body(dir.path(), "bicombing_stats");
    assert_eq!(rows[0][0], "shortlex");
    assert_eq!(rows[1][0], "shortlex-anti");
    let m = |r: &Vec<String>| r[2].parse::<f64>().unwrap();
    assert!(m(&rows[1]) <= m(&rows[0]));
    assert!(m(&rows[0]).is_finite());
}

#[test]
fn verify_passes_on_both_test_groups() {
    let (code, dir) = run(&["verify", "--presentation", &data("f2.txt"), "--radius", "4"]);
    assert_eq!(code, EXIT_PASS);
    assert!(body(dir.path(), "verify").iter().all(|r| r[1] == "pass"));
    let (code, _) = run(&[
        "verify",
        "--presentation",
        &data("surface2.txt"),
        "--radius",
        "2",
    ]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn corrupted_kernel_fails_verification() {
    let f2 = data("f2.txt");
    let (code, dir) = run(&["kernel", "--presentation", &f2, "--radius", "3"]);
    assert_eq!(code, EXIT_PASS);
    let kernel = dir.path().join("kernel.csv");
    let text = fs::read_to_string(&kernel).unwrap();
    let path = kernel.display().to_string();
    assert_eq!(
        run(&[
            "verify",
            "--presentation",
            &f2,
            "--radius",
            "3",
            "--kernel",
            &path
        ])
        .0,
        EXIT_PASS
    );

    let corrupted = dir.path().join("corrupted.csv");
    fs::write(&corrupted, text.replace("\n7,7,0\n", "\n7,7,1\n")).unwrap();
    let path = corrupted.display().to_string();
    let (code, out) = run(&[
        "verify",
        "--presentation",
        &f2,
        "--radius",
        "3",
        "--kernel",
        &path,
    ]);
    assert_eq!(code, EXIT_VIOLATION);
    let rows = body(out.path(), "verify");
    let structure = rows.iter().find(|r| r[0] == "kernel_structure").unwrap();
    assert_eq!(structure[1], "fail");
    assert!(
        structure[3].starts_with("K(") && structure[3].ends_with(")=1"),
        "{structure:?}"
    );
}

#[test]
fn norms_follow_the_tree_formula() {
    let (code, dir) = run(&["norms", "--presentation", &data("f2.txt"), "--radius", "5"]);
    assert_eq!(code, EXIT_PASS);
    let rows = body(dir.path(), "norms");
    assert_eq!(rows.len(), 484);
    for r in rows {
        let d: f64 = r[1].parse().unwrap();
        let e: f64 = r[4].parse().unwrap();
        assert!((e - (d.sqrt() + 2.0)).abs() <= 1e-9);
    }
}

#[test]
fn opnorm_on_free_groups_is_isometric() {
    let args = [
        "opnorm",
        "--presentation",
        &data("f2.txt"),
        "--radius",
        "3",
        "--restarts",
        "4",
    ];
    let (code, dir) = run(&args);
    assert_eq!(code, EXIT_PASS);
    let rows = body(dir.path(), "opnorm");
    assert_eq!(rows.len(), 17);
    for r in rows {
        assert!(r[1].parse::<f64>().unwrap() <= 1.0 + 1e-9);
        assert_eq!(r[2], "1");
        assert_eq!(r[3], "2000");
    }
    let bad = [
        "opnorm",
        "--presentation",
        &data("f2.txt"),
        "--radius",
        "2",
        "--scan-radius",
        "2",
    ];
    assert_eq!(run(&bad).0, EXIT_INPUT);
}

#[test]
fn identity_action_is_unbounded() {
    let args = [
        "action",
        "--presentation",
        &data("f2.txt"),
        "--radius",
        "5",
        "--action",
        &data("identity_f2.action"),
    ];
    let (code, dir) = run(&args);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        header_value(dir.path(), "action", "verdict").as_deref(),
        Some("unbounded on scanned range")
    );
    let c: f64 = header_value(dir.path(), "action", "fitted_c")
        .unwrap()
        .parse()
        .unwrap();
    assert!((c - 1.0).abs() < 1e-9);
    assert_eq!(body(dir.path(), "action_norms").len(), 484);
}

#[test]
fn non_homomorphism_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let action = dir.path().join("bad.action");
    fs::write(&action, "target_rank: 2\na -> a\nb -> b\nc -> b\nd -> 1\n").unwrap();
    let args = [
        "action",
        "--presentation",
        &data("f2xf2.txt"),
        "--action",
        &action.display().to_string(),
    ];
    assert_eq!(run(&args).0, EXIT_INPUT);
}

#[test]
fn quasitree_verdicts() {
    let (code, dir) = run(&[
        "quasitree",
        "--input",
        &data("tree_f2.quasitree"),
        "--presentation",
        &data("f2.txt"),
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(body(dir.path(), "quasitree").iter().all(|r| r[1] == "pass"));
    let (code, dir) = run(&["quasitree", "--input", &data("path4.quasitree")]);
    assert_eq!(code, EXIT_VIOLATION);
    let rows = body(dir.path(), "quasitree");
    assert_eq!(rows[1][1], "fail");
    assert!(rows[1][2].contains("witness="));
}

fn stripped(path: PathBuf) -> String {
    let key = format!("# {TIMESTAMP_KEY}: ");
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with(&key))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn reports_are_deterministic() {
    let surface = data("surface2.txt");
    for (name, args) in [
        (
            "verify",
            vec![
                "verify",
                "--presentation",
                &surface,
                "--radius",
                "2",
                "--seed",
                "9",
            ],
        ),
        (
            "opnorm",
            vec![
                "opnorm",
                "--presentation",
                &surface,
                "--radius",
                "2",
                "--seed",
                "9",
                "--restarts",
                "3",
            ],
        ),
        (
            "bicombing_stats",
            vec![
                "bicombing-stats",
                "--presentation",
                &surface,
                "--radius",
                "2",
                "--samples",
                "300",
            ],
        ),
    ] {
        let (a, first) = run(&args);
        let (b, second) = run(&args);
        assert_eq!((a, b), (EXIT_PASS, EXIT_PASS));
        let (x, y) = (
            first.path().join(format!("{name}.csv")),
            second.path().join(format!("{name}.csv")),
        );
        assert_eq!(stripped(x), stripped(y), "{name}");
    }
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hypaffine");
    let ok = Command::new(bin)
        .args(["ball", "--presentation", &data("f2.txt"), "--radius", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8(ok.stdout)
        .unwrap()
        .contains("sphere,count\n0,1\n1,4\n2,12\n"));
    let missing = Command::new(bin)
        .args(["ball", "--presentation", "/nonexistent"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_INPUT));
    let rejected = Command::new(bin)
        .args(["quasitree", "--input", &data("path4.quasitree")])
        .output()
        .unwrap();
    assert_eq!(rejected.status.code(), Some(EXIT_VIOLATION));
}
