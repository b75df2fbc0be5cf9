//! End-to-end tests of the `usc-trio` binary: exit codes, stream
//! separation, the CSV contract, and sweep/verify behavior as a user
//! sees them.

use std::io::Write as _;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usc-trio"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usc-trio"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary should launch")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

fn code(out: &Output) -> i32 {
    out.status
        .code()
        .expect("process should exit, not be killed")
}

/// Parses CSV data rows (everything after the header) as f64 fields.
fn data_rows(out: &Output) -> Vec<Vec<f64>> {
    stdout_str(out)
        .lines()
        .skip(1)
        .map(|line| {
            line.split(',')
                .map(|f| f.parse::<f64>().expect("numeric field"))
                .collect()
        })
        .collect()
}

#[test]
fn simulate_writes_csv_to_stdout_and_nothing_to_stderr() {
    let out = run(&["simulate", "--set", "n_points=5", "--set", "t_end=2"]);
    assert_eq!(code(&out), 0);
    assert!(stderr_str(&out).is_empty(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    assert!(header.starts_with("t,N1,N2,N3,"));
    assert!(header.ends_with(",nu_min"));
    assert_eq!(header.split(',').count(), 20);
    assert_eq!(lines.count(), 5);
    let rows = data_rows(&out);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[4][0], 2.0);
    // Vacuum start: every derived quantity is zero and the state is pure.
    for v in &rows[0][1..19] {
        assert!(v.abs() < 1e-12, "nonzero at t = 0: {v}");
    }
    assert!((rows[0][19] - 1.0).abs() < 1e-12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["simulate", "--set", "n_points=40", "--set", "t_end=30"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_does_not_change_the_output() {
    let args = ["simulate", "--set", "n_points=24", "--set", "t_end=12"];
    let free = run(&args);
    let capped = run_env(&args, "USC_TRIO_THREADS", "1");
    assert_eq!(code(&capped), 0);
    assert_eq!(free.stdout, capped.stdout);
}

#[test]
fn config_file_and_set_flags_agree_and_set_wins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# open chain, mid-strength damping").unwrap();
    writeln!(f, "gamma = 25").unwrap();
    writeln!(f, "J13 = 0.05").unwrap();
    writeln!(f, "n_points = 4").unwrap();
    writeln!(f, "t_end = 8").unwrap();
    drop(f);
    let cfg_path = path.to_str().unwrap();

    let from_file = run(&["simulate", "--config", cfg_path]);
    let from_flags = run(&[
        "simulate",
        "--set",
        "gamma=25",
        "--set",
        "J13=0.05",
        "--set",
        "n_points=4",
        "--set",
        "t_end=8",
    ]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);

    // A later --set overrides the file value.
    let overridden = run(&["simulate", "--config", cfg_path, "--set", "gamma=50"]);
    let reference = run(&[
        "simulate",
        "--set",
        "J13=0.05",
        "--set",
        "n_points=4",
        "--set",
        "t_end=8",
    ]);
    assert_eq!(overridden.stdout, reference.stdout);
}

#[test]
fn out_path_redirects_data_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = run(&[
        "simulate",
        "--set",
        "n_points=3",
        "--set",
        "t_end=1",
        "--set",
        &format!("out_path={}", path.display()),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 4);
    assert!(written.starts_with("t,N1,"));
}

#[test]
fn covariance_output_appends_the_matrix_columns() {
    let out = run(&[
        "simulate",
        "--set",
        "outputs=covariance",
        "--set",
        "n_points=3",
        "--set",
        "t_end=1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 56);
    assert!(header.contains("sigma_re_1_1"));
    assert!(header.ends_with("sigma_im_5_6"));
    let rows = data_rows(&out);
    // sigma(0) is the identity: unit diagonal, vanishing off-diagonals.
    assert!((rows[0][20] - 1.0).abs() < 1e-12);
    assert!(rows[0][21].abs() < 1e-12);
}

#[test]
fn config_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["simulate", "--set", "J14=0.1"],
        &["simulate", "--set", "gamma=brisk"],
        &["simulate", "--set", "n_points=1"],
        &["simulate", "--set", "outputs=entropy"],
        &["simulate", "--config", "/nonexistent/run.cfg"],
        &["sweep"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(code(&out), 2, "args {args:?}: stderr {}", stderr_str(&out));
        assert!(!stderr_str(&out).is_empty());
        assert!(out.stdout.is_empty() || args[0] == "sweep");
    }
    let unknown = run(&["simulate", "--set", "J14=0.1"]);
    assert!(stderr_str(&unknown).contains("unknown key"));
}

#[test]
fn unbound_parameters_exit_2_with_a_reason() {
    let out = run(&["simulate", "--set", "J12=2"]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr_str(&out).contains("bound"),
        "stderr: {}",
        stderr_str(&out)
    );
}

#[test]
fn bad_thread_env_exits_2() {
    let out = run_env(&["simulate"], "USC_TRIO_THREADS", "zero");
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("USC_TRIO_THREADS"));
}

#[test]
fn hub_relabelled_chain_has_equal_negativity_columns() {
    // Couple through c instead of b: E_ac and E_bc are then the two
    // equivalent edge pairs and must track each other exactly.
    let out = run(&[
        "simulate",
        "--set",
        "J12=0",
        "--set",
        "J13=0.1",
        "--set",
        "J23=0.1",
        "--set",
        "n_points=25",
        "--set",
        "t_end=50",
    ]);
    assert_eq!(code(&out), 0);
    for row in data_rows(&out) {
        assert!(
            (row[14] - row[15]).abs() <= 1e-9,
            "E_ac {} vs E_bc {}",
            row[14],
            row[15]
        );
    }
}

#[test]
fn decoupled_oscillator_stays_in_vacuum() {
    let out = run(&[
        "simulate",
        "--set",
        "J13=0",
        "--set",
        "J23=0",
        "--set",
        "J12=0.1",
        "--set",
        "n_points=12",
        "--set",
        "t_end=40",
    ]);
    assert_eq!(code(&out), 0);
    for row in data_rows(&out) {
        assert_eq!(row[3], 0.0, "N3 should be exactly zero");
        assert!(
            row[14] <= 1e-12,
            "E_ac should be round-off only: {}",
            row[14]
        );
        assert!(
            row[15] <= 1e-12,
            "E_bc should be round-off only: {}",
            row[15]
        );
    }
}

#[test]
fn empty_sweep_writes_only_the_header() {
    let out = run(&[
        "sweep",
        "--set",
        "sweep_param=gamma",
        "--set",
        "sweep_min=1",
        "--set",
        "sweep_max=1",
        "--set",
        "sweep_steps=0",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("gamma,t,N1,"));
}

#[test]
fn sweep_skips_unbound_points_and_reports_them() {
    let out = run(&[
        "sweep",
        "--set",
        "sweep_param=J12",
        "--set",
        "sweep_min=0.8",
        "--set",
        "sweep_max=1.2",
        "--set",
        "sweep_steps=3",
        "--set",
        "t_end=20",
    ]);
    assert_eq!(code(&out), 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1, "only J12 = 0.8 keeps all normal modes bound");
    let err = stderr_str(&out);
    assert!(err.contains("skipping J12 = 1.2"), "stderr: {err}");
    assert_eq!(err.matches("skipping").count(), 2);
}

#[test]
fn sweep_through_the_resonance_is_flagged() {
    let out = run(&[
        "sweep",
        "--set",
        "sweep_param=omega2",
        "--set",
        "sweep_min=0.4",
        "--set",
        "sweep_max=0.6",
        "--set",
        "sweep_steps=5",
        "--set",
        "t_end=20",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(data_rows(&out).len(), 5);
    assert!(
        stderr_str(&out).contains("resonant"),
        "stderr: {}",
        stderr_str(&out)
    );
}

#[test]
fn steady_occupation_grows_with_the_swept_coupling() {
    let out = run(&[
        "sweep",
        "--set",
        "sweep_param=J12",
        "--set",
        "sweep_min=0.05",
        "--set",
        "sweep_max=0.65",
        "--set",
        "sweep_steps=7",
        "--set",
        "J13=0",
        "--set",
        "J23=0",
        "--set",
        "t_end=400",
    ]);
    assert_eq!(code(&out), 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 7);
    for pair in rows.windows(2) {
        assert!(
            pair[1][2] > pair[0][2],
            "steady N1 not increasing: {} then {}",
            pair[0][2],
            pair[1][2]
        );
    }
}

#[test]
fn isotropic_gamma_sweep_samples_each_relaxation_time() {
    let out = run(&[
        "sweep",
        "--set",
        "omega1=1",
        "--set",
        "omega2=1",
        "--set",
        "omega3=1",
        "--set",
        "J12=0.3",
        "--set",
        "J13=0.3",
        "--set",
        "J23=0.3",
        "--set",
        "sweep_param=gamma",
        "--set",
        "sweep_min=20",
        "--set",
        "sweep_max=100",
        "--set",
        "sweep_steps=3",
    ]);
    assert_eq!(code(&out), 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 3);
    // Ten relaxation times stretch with gamma, so the sampling times
    // must strictly increase; the steady occupation itself is
    // gamma-independent.
    assert!(rows[1][1] > rows[0][1] && rows[2][1] > rows[1][1]);
    let steady = 0.3 * 0.3 / (4.0 * (1.0 + 2.0 * 0.3) * (1.0 - 0.3));
    for row in &rows {
        for v in &row[2..5] {
            assert!((v - steady).abs() < 0.05 * steady, "N {v} vs {steady}");
        }
    }
}

#[test]
fn verify_emits_one_json_line_per_suite_and_exits_0() {
    let out = run(&["verify"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 15);
    for line in &lines {
        assert!(line.starts_with("{\"suite\":\""), "line: {line}");
        assert!(line.contains("\"pass\":true"), "failing suite: {line}");
        assert!(line.contains("\"max_residual\":"));
        assert!(line.ends_with('}'));
    }
    for suite in [
        "normal_modes",
        "symplectic_conditions",
        "milburn_series",
        "fock_excitations",
        "physicality",
        "steady_regression",
        "open_chain_symmetry",
        "polygamy",
        "monogamy_findings",
        "negative_control",
    ] {
        assert!(
            lines
                .iter()
                .any(|l| l.contains(&format!("\"suite\":\"{suite}\""))),
            "missing suite {suite}"
        );
    }
    // Finite gamma: the mixedness witness runs and purity is skipped.
    let mixedness = lines
        .iter()
        .find(|l| l.contains("\"suite\":\"mixedness\""))
        .unwrap();
    assert!(mixedness.contains("\"pass\":true"));
    let purity = lines
        .iter()
        .find(|l| l.contains("\"suite\":\"purity\""))
        .unwrap();
    assert!(purity.contains("skipped"), "purity line: {purity}");
}
