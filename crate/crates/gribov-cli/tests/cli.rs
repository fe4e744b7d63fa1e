//! End-to-end CLI behavior: exit-code taxonomy, CSV schema, output-path
//! handling and byte-level determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gribov-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_reports_spectrum_and_exits_zero() {
    let out = run(&[
        "solve",
        "--lambda-prime",
        "1",
        "--mu",
        "1",
        "--lambda",
        "1",
        "--n",
        "60",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# gribov-spectra v"));
    assert!(text.contains("omega,sigma,gap"));
    assert!(text.contains("sigma = 1/omega"));
}

#[test]
fn nonpositive_lambda_is_a_validation_error() {
    let out = run(&["solve", "--lambda-prime", "1", "--mu", "1", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_a_validation_error() {
    let out = run(&["solve", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_of_theory_params_rejected_without_override() {
    // lambda' = 4, mu = 0.1, lambda = 1 gives delta < 0
    let out = run(&[
        "solve",
        "--lambda-prime",
        "4",
        "--mu",
        "0.1",
        "--lambda",
        "1",
        "--n",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "solve",
        "--lambda-prime",
        "4",
        "--mu",
        "0.1",
        "--lambda",
        "1",
        "--n",
        "40",
        "--allow-out-of-theory",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("out-of-theory override"));
}

#[test]
fn non_convergence_is_a_numerical_error() {
    // unreachable tolerance forces the iteration budget
    let out = run(&[
        "solve",
        "--lambda-prime",
        "1",
        "--mu",
        "1",
        "--lambda",
        "1",
        "--n",
        "16",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn output_collision_requires_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let path_s = path.to_str().unwrap();
    let args = [
        "solve",
        "--lambda-prime",
        "1",
        "--mu",
        "1",
        "--lambda",
        "1",
        "--n",
        "40",
        "--output",
        path_s,
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    // second run collides
    assert_eq!(run(&args).status.code(), Some(1));
    // --force overwrites
    let mut forced: Vec<&str> = args.to_vec();
    forced.push("--force");
    assert_eq!(run(&forced).status.code(), Some(0));
}

#[test]
fn sweep_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "sweep-mu",
            "--lambda-prime",
            "1",
            "--lambda",
            "1",
            "--mu-grid",
            "0.5,1,2",
            "--n",
            "48",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    let ca = std::fs::read(&a).unwrap();
    let cb = std::fs::read(&b).unwrap();
    assert!(!ca.is_empty());
    assert_eq!(ca, cb, "sweep CSV not byte-identical");
}

#[test]
fn kernel_dump_has_matrix_schema() {
    let out = run(&[
        "kernel-dump",
        "--lambda-prime",
        "1",
        "--mu",
        "1",
        "--lambda",
        "1",
        "--n",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# gribov-spectra v"));
    assert_eq!(
        lines.next().unwrap(),
        "i,j,y_i,y_j,kernel,entry,lambda_prime,mu,lambda,frame,n"
    );
    // n^2 data rows, row-major: first row is (0, 0)
    assert!(lines.next().unwrap().starts_with("0,0,"));
    let data_rows = text.lines().skip(2).filter(|l| !l.is_empty()).count();
    assert_eq!(data_rows, 64 + 1); // 64 entries + trailing summary line
}

#[test]
fn hsnorm_runs_in_both_frames() {
    for frame in ["native", "limit"] {
        let out = run(&[
            "hsnorm",
            "--lambda-prime",
            "1",
            "--mu",
            "1",
            "--lambda",
            "1",
            "--n",
            "60",
            "--frame",
            frame,
        ]);
        assert_eq!(out.status.code(), Some(0), "{frame}: {}", stdout(&out));
        assert!(stdout(&out).contains("hs_norm"));
    }
}

#[test]
fn limit_study_runs_small() {
    let out = run(&[
        "limit-study",
        "--mu",
        "1",
        "--lambda",
        "1",
        "--rho-prime-grid",
        "4,8",
        "--n",
        "48",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("rho_prime,omega,omega_diff,hs,hs_dist"));
    assert!(text.contains("omega_diff_strictly_decreasing"));
}

#[test]
fn verify_exits_three_on_failing_criterion() {
    // a huge truncation tail weight wrecks the limit-frame domain, so the
    // frame-invariance criterion fails and the verdict gates the exit code
    let out = run(&["verify", "--n", "48", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn verify_small_grid_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("v1.csv");
    let b = dir.path().join("v2.csv");
    for path in [&a, &b] {
        let out = run(&["verify", "--n", "64", "--output", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "verify failed:\n{}",
            stdout(&out)
        );
        let text = stdout(&out);
        for k in 1..=10 {
            assert!(
                text.contains(&format!("criterion {k:>2} [PASS]")),
                "missing PASS line for criterion {k}:\n{text}"
            );
        }
    }
    let ca = std::fs::read(&a).unwrap();
    let cb = std::fs::read(&b).unwrap();
    assert_eq!(ca, cb, "verify CSV not byte-identical");
}
