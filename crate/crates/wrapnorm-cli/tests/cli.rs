//! End-to-end tests of the `wrapnorm` binary: output text, CSV shapes,
//! determinism, and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wrapnorm"))
}

/// Run and require success; returns stdout.
fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary should spawn");
    assert!(
        out.status.success(),
        "command {:?} failed with {:?}\nstderr: {}",
        args,
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout should be UTF-8")
}

/// Run and require a specific failure code; returns stderr.
fn run_err(args: &[&str], want_code: i32) -> String {
    let out = bin().args(args).output().expect("binary should spawn");
    assert_eq!(
        out.status.code(),
        Some(want_code),
        "command {:?}\nstdout: {}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

#[test]
fn eval_zero_order_theta_is_the_uniform_density() {
    let out = run_ok(&[
        "eval", "--x", "0", "--mu", "0", "--sigma", "1", "--method", "g", "--n", "0",
    ]);
    assert_eq!(out, "0.15915494309189535\n");
}

#[test]
fn eval_auto_at_large_sigma_reports_a_uniform_plan() {
    let out = run_ok(&[
        "eval", "--x", "0", "--sigma", "20", "--method", "auto", "--accuracy", "1e-5",
    ]);
    assert_eq!(out, "0.15915494309189535\nkind=uniform n=0\n");
}

#[test]
fn eval_reference_matches_the_library() {
    let wn = wrapnorm::WrappedNormal::new(0.0, 1.0).unwrap();
    let expected = wrapnorm::pdf_reference(wrapnorm::wrap(1.0).unwrap(), &wn)
        .unwrap()
        .density;
    let out = run_ok(&["eval", "--x", "1", "--sigma", "1", "--method", "reference"]);
    assert_eq!(out, format!("{expected}\n"));
}

#[test]
fn eval_accepts_negative_and_unwrapped_angles() {
    let wrapped = run_ok(&["eval", "--x", "-1.5", "--sigma", "0.8", "--method", "f", "--n", "2"]);
    let shifted = run_ok(&[
        "eval",
        "--x",
        "4.783185307179586",
        "--sigma",
        "0.8",
        "--method",
        "f",
        "--n",
        "2",
    ]);
    // -1.5 and -1.5 + 2π wrap to the same angle, hence the same density.
    assert_eq!(wrapped, shifted);
}

#[test]
fn eval_flag_combinations_are_usage_errors() {
    let err = run_err(&["eval", "--x", "0", "--sigma", "1", "--method", "f"], 2);
    assert!(err.contains("usage error"), "stderr: {err}");
    run_err(
        &[
            "eval", "--x", "0", "--sigma", "1", "--method", "auto", "--accuracy", "1e-5", "--n",
            "3",
        ],
        2,
    );
    run_err(
        &["eval", "--x", "0", "--sigma", "1", "--method", "auto"],
        2,
    );
    run_err(
        &["eval", "--x", "0", "--sigma", "1", "--method", "uniform", "--accuracy", "1e-5"],
        2,
    );
}

#[test]
fn eval_invalid_values_are_domain_errors() {
    let err = run_err(&["eval", "--x", "0", "--sigma", "0", "--method", "uniform"], 1);
    assert!(err.contains("error:"), "stderr: {err}");
    run_err(
        &["eval", "--x", "0", "--sigma", "1", "--method", "auto", "--accuracy", "1.5"],
        1,
    );
}

#[test]
fn plan_inside_the_table_cites_the_table() {
    let out = run_ok(&["plan", "--sigma", "2", "--accuracy", "1e-5"]);
    assert!(out.contains("kind=f\n"), "output: {out}");
    assert!(out.contains("n=1\n"), "output: {out}");
    assert!(out.contains("source=table\n"), "output: {out}");
    assert!(out.contains("n_f="), "output: {out}");
    assert!(out.contains("n_g="), "output: {out}");
}

#[test]
fn plan_off_table_accuracy_falls_back_to_formulas() {
    let out = run_ok(&["plan", "--sigma", "2", "--accuracy", "1e-7"]);
    assert!(out.contains("source=theoretical\n"), "output: {out}");
}

#[test]
fn plan_forced_theoretical_ignores_the_table() {
    let out = run_ok(&[
        "plan",
        "--sigma",
        "2",
        "--accuracy",
        "1e-5",
        "--planner",
        "theoretical",
    ]);
    assert!(out.contains("source=theoretical\n"), "output: {out}");
}

#[test]
fn plan_surfaces_the_stored_row_note_at_the_tightest_accuracy() {
    let out = run_ok(&["plan", "--sigma", "10", "--accuracy", "1e-15"]);
    assert!(out.contains("kind=uniform\n"), "output: {out}");
    assert!(out.contains("n=0\n"), "output: {out}");
    assert!(out.contains("note="), "output: {out}");
}

#[test]
fn sweep_row_count_and_byte_stability() {
    let args = [
        "sweep",
        "--kind",
        "f",
        "--sigma-min",
        "1",
        "--sigma-max",
        "2",
        "--steps",
        "2",
        "--n-values",
        "0,1,2",
        "--grid-size",
        "64",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second, "sweep output must be byte-stable");
    assert!(first.starts_with("sigma,n,error\n"), "output: {first}");
    assert_eq!(data_rows(&first).len(), 6, "2 sigmas x 3 orders");
    for row in data_rows(&first) {
        assert_eq!(row.split(',').count(), 3, "row: {row}");
    }
}

#[test]
fn sweep_rejects_bad_ranges() {
    run_err(
        &["sweep", "--kind", "f", "--sigma-min", "5", "--sigma-max", "1"],
        1,
    );
    run_err(
        &["sweep", "--kind", "g", "--sigma-min", "1", "--sigma-max", "2", "--steps", "1"],
        1,
    );
}

#[test]
fn crossover_emits_the_published_loose_table() {
    let out = run_ok(&["crossover", "--accuracy", "1e-5"]);
    let rows = data_rows(&out);
    assert!(out.starts_with("sigma_upper,kind,n\n"), "output: {out}");
    assert_eq!(rows.len(), 4, "output: {out}");
    assert_eq!(rows[3], "inf,g,0");
    let expected = [(1.34, "f,0"), (2.28, "f,1"), (4.56, "g,1")];
    for (row, (sigma, plan)) in rows.iter().zip(expected) {
        let (bound, rest) = row.split_once(',').unwrap();
        let bound: f64 = bound.parse().unwrap();
        assert!((bound - sigma).abs() <= 0.05, "row: {row}");
        assert_eq!(rest, plan, "row: {row}");
    }
}

#[test]
fn crossover_at_loose_accuracy_keeps_a_small_sigma_wrapped_region() {
    let out = run_ok(&["crossover", "--accuracy", "0.5"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2, "output: {out}");
    assert!(rows[0].ends_with(",f,0"), "output: {out}");
    assert_eq!(rows[1], "inf,g,0");
}

#[test]
fn crossover_rejects_out_of_range_accuracy() {
    run_err(&["crossover", "--accuracy", "0"], 1);
}

#[test]
fn min_n_orders_stay_small_and_peak_in_the_middle() {
    let out = run_ok(&[
        "min-n",
        "--accuracy",
        "1e-15",
        "--sigma-min",
        "0.1",
        "--sigma-max",
        "20",
        "--steps",
        "40",
    ]);
    assert!(out.starts_with("sigma,n_f,n_g,n_combined,kind\n"), "output: {out}");
    let orders: Vec<u32> = data_rows(&out)
        .iter()
        .map(|row| row.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(orders.len(), 40);
    let max = *orders.iter().max().unwrap();
    assert!(max <= 10, "combined order exceeded 10: {orders:?}");
    assert!(orders[0] < max, "order should rise after the left edge");
    assert!(orders[39] < max, "order should fall before the right edge");
}

#[test]
fn bench_rows_have_deterministic_plans_and_positive_timings() {
    let out = run_ok(&[
        "bench",
        "--sigma-list",
        "0.5,10",
        "--accuracy",
        "1e-5",
        "--repetitions",
        "3",
    ]);
    assert!(out.starts_with("sigma,kind,n,ns_per_eval\n"), "output: {out}");
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 6, "output: {out}");
    let expected_plans = [
        ("0.5", "f", "0"),
        ("0.5", "f", "2"),
        ("0.5", "reference", "0"),
        ("10", "g", "0"),
        ("10", "g", "1"),
        ("10", "reference", "0"),
    ];
    for (row, (sigma, kind, n)) in rows.iter().zip(expected_plans) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(&fields[..3], &[sigma, kind, n], "row: {row}");
        let ns: f64 = fields[3].parse().unwrap();
        assert!(ns.is_finite() && ns > 0.0, "row: {row}");
    }
}

#[test]
fn out_flag_writes_the_file_instead_of_stdout() {
    let path = std::env::temp_dir().join(format!("wrapnorm_cli_test_{}.csv", std::process::id()));
    let path_str = path.to_str().unwrap();
    let stdout = run_ok(&["crossover", "--accuracy", "1e-5", "--out", path_str]);
    assert!(stdout.is_empty(), "stdout should be empty: {stdout}");
    let written = std::fs::read_to_string(&path).expect("output file should exist");
    assert!(written.starts_with("sigma_upper,kind,n\n"), "file: {written}");
    std::fs::remove_file(&path).ok();
}
