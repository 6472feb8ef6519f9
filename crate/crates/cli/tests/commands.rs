use std::process::Command;

use qhmetric_cli::{run, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

fn run_args(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("qhm").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn constants_print_the_ring_chain() {
    let (code, text) = run_args(&[
        "constants",
        "--H",
        "1",
        "--q",
        "0.5",
        "--c",
        "1",
        "--cprime",
        "1",
    ]);
    assert_eq!(code, EXIT_PASS);
    for line in ["M = 4", "alpha = 3", "beta = 12", "(1/5184)"] {
        assert!(text.contains(line), "missing {line} in\n{text}");
    }
}

#[test]
fn halfplane_distance_matches_log_two() {
    let (code, text) = run_args(&[
        "qh",
        "--domain",
        "halfplane",
        "--from",
        "0,1",
        "--to",
        "0,2",
        "--grading",
        "0.05",
    ]);
    assert_eq!(code, EXIT_PASS);
    let k: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("k = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((k - 2f64.ln()).abs() <= 0.02 * 2f64.ln());
}

#[test]
fn negative_coordinates_parse() {
    let (code, _) = run_args(&[
        "qh",
        "--domain",
        "punctured",
        "--from",
        "-1,0",
        "--to",
        "0,-1",
    ]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn usage_and_configuration_errors_exit_one() {
    assert_eq!(run_args(&["qh", "--frobnicate"]).0, EXIT_CONFIG);
    assert_eq!(run_args(&["repro", "example-9-9"]).0, EXIT_CONFIG);
    assert_eq!(
        run_args(&["qh", "--domain", "moon", "--from", "0,1", "--to", "0,2"]).0,
        EXIT_CONFIG
    );
    assert_eq!(
        run_args(&[
            "qh",
            "--domain",
            "halfplane",
            "--from",
            "0,-1",
            "--to",
            "0,2"
        ])
        .0,
        EXIT_CONFIG
    );
    assert_eq!(
        run_args(&[
            "qh",
            "--domain",
            "halfplane",
            "--from",
            "0,1",
            "--to",
            "0,2",
            "--grading",
            "0.9"
        ])
        .0,
        EXIT_CONFIG
    );
    assert_eq!(
        run_args(&[
            "check-ring",
            "--map",
            "inversion",
            "--seed",
            "1",
            "--alpha",
            "0.5"
        ])
        .0,
        EXIT_CONFIG
    );
    assert_eq!(
        run_args(&[
            "check-wqs",
            "--map",
            "inversion",
            "--domain",
            "halfplane",
            "--seed",
            "1"
        ])
        .0,
        EXIT_CONFIG
    );
}

#[test]
fn exceeded_bound_exits_two() {
    let base = [
        "check-wqs",
        "--map",
        "inversion",
        "--seed",
        "5",
        "--count",
        "20",
    ];
    let (code, text) = run_args(&[&base[..], &["--bound", "50"]].concat());
    assert_eq!(code, EXIT_FAIL);
    assert!(text.contains("FAIL"));
    let (code, _) = run_args(&[&base[..], &["--bound", "1000"]].concat());
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn repro_witness_above_h() {
    let (code, text) = run_args(&["repro", "example-1-8", "--n", "10", "--h", "9"]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("9.8386991"));
    let (code, _) = run_args(&["repro", "example-1-8", "--n", "10", "--h", "10"]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn scenario_file_drives_an_estimator() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    let out = dir.path().join("reports");
    std::fs::write(
        &cfg,
        format!(
            r#"
seed = 4
domain = "halfplane"
map = {{ kind = "half_plane_shear" }}

[sample]
count = 30
window = {{ shape = "rect", x0 = -1.0, y0 = 0.5, x1 = 1.0, y1 = 2.0 }}

[output]
dir = "{}"
svg = true
"#,
            out.display()
        ),
    )
    .unwrap();
    let (code, text) = run_args(&["check-relative", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.contains("half-plane shear"));
    let csv = std::fs::read_to_string(out.join("check-relative.csv")).unwrap();
    assert!(csv.starts_with(qhmetric_cli::output::CSV_HEADER));
    assert!(out.join("check-relative.svg").exists());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("check-relative.json")).unwrap())
            .unwrap();
    assert_eq!(json["seed"], 4);
}

#[test]
fn missing_seed_is_a_configuration_error() {
    let status = Command::new(env!("CARGO_BIN_EXE_qhm"))
        .args(["check-qc", "--map", "inversion"])
        .env_remove("QH_SEED")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn seed_comes_from_the_environment() {
    let run_with = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_qhm"))
            .args(["check-wqs", "--map", "shear", "--count", "10"])
            .env("QH_SEED", seed)
            .output()
            .unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    let a = run_with("8");
    assert!(a.contains("seed 8"));
    assert_eq!(a, run_with("8"));
    assert_ne!(a, run_with("9"));
}

#[test]
fn ball_reports_the_node_set() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_args(&[
        "ball",
        "--domain",
        "frame-omega",
        "--center",
        "0,0",
        "--radius",
        "1.4142135623730951",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("nodes = 283"), "{text}");
    assert!(dir.path().join("ball.json").exists());
}
