//! End-to-end checks of the command-line surface: golden tables, CSV shape,
//! exit codes, and seed/thread determinism.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn harris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harris"))
        .args(args)
        .output()
        .expect("binary should run")
}

/// Runs the binary, asserts success, and returns stdout as UTF-8.
fn stdout(args: &[&str]) -> String {
    let out = harris(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout should be UTF-8")
}

#[test]
fn pmf_2_2_table_is_byte_exact() {
    let got = stdout(&["pmf", "--m", "2", "--k", "2", "--rmax", "13"]);
    let want = "x,p\n\
                1,0.707107\n\
                3,0.176777\n\
                5,0.066291\n\
                7,0.027621\n\
                9,0.012084\n\
                11,0.005438\n\
                13,0.002492\n\
                15,0.001157\n\
                17,0.000542\n\
                19,0.000256\n\
                21,0.000122\n\
                23,0.000058\n\
                25,0.000028\n\
                27,0.000013\n";
    assert_eq!(got, want);
}

#[test]
fn pmf_single_row_at_rmax_zero() {
    let got = stdout(&["pmf", "--m", "2", "--k", "2", "--rmax", "0"]);
    assert_eq!(got, "x,p\n1,0.707107\n");
}

#[test]
fn pmf_50_5_spot_rows() {
    let got = stdout(&["pmf", "--m", "50", "--k", "5", "--rmax", "20"]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines.len(), 22);
    assert_eq!(lines[0], "x,p");
    assert_eq!(lines[1], "1,0.457305");
    assert_eq!(lines[3], "11,0.052703");
    assert_eq!(lines[18], "86,0.007290");
    assert_eq!(lines[21], "101,0.006029");
}

#[test]
fn pmf_4_5_spot_rows() {
    let got = stdout(&["pmf", "--m", "4", "--k", "5", "--rmax", "19"]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[1], "1,0.757858");
    assert_eq!(lines[4], "16,0.028135");
    assert_eq!(lines[20], "96,0.000066");
}

#[test]
fn pmf_h0_variant_shifts_the_support() {
    let got = stdout(&[
        "pmf",
        "--m",
        "2",
        "--k",
        "2",
        "--variant",
        "h0",
        "--rmax",
        "2",
    ]);
    assert_eq!(got, "x,p\n0,0.707107\n2,0.176777\n4,0.066291\n");
}

#[test]
fn cdf_starts_at_the_first_mass_and_is_nondecreasing() {
    let got = stdout(&["cdf", "--m", "2", "--k", "2", "--rmax", "10"]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines[0], "x,F");
    assert_eq!(lines[1], "1,0.707107");
    let fs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(fs.windows(2).all(|w| w[0] <= w[1]));
    assert!(*fs.last().unwrap() <= 1.0);
}

#[test]
fn sample_is_seed_deterministic_and_stream_split() {
    let args = ["sample", "--m", "2", "--k", "2", "--n", "40", "--seed", "9"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let c = stdout(&[
        "sample", "--m", "2", "--k", "2", "--n", "40", "--seed", "9", "--stream", "1",
    ]);
    assert_ne!(a, c);

    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "x");
    assert_eq!(lines.len(), 41);
    for v in &lines[1..] {
        let v: u64 = v.parse().expect("integer draw");
        assert!(v >= 1 && (v - 1).is_multiple_of(2), "off-lattice draw {v}");
    }
}

#[test]
fn samplers_accept_the_three_route_names() {
    for sampler in ["nb", "gamma-poisson", "inverse"] {
        let got = stdout(&[
            "sample",
            "--m",
            "10",
            "--k",
            "5",
            "--n",
            "10",
            "--seed",
            "3",
            "--sampler",
            sampler,
        ]);
        assert_eq!(got.lines().count(), 11);
    }
}

fn fit_with_stdin(data: &str, extra: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_harris"))
        .arg("fit")
        .args(extra)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary should spawn");
    child
        .stdin
        .take()
        .expect("stdin handle")
        .write_all(data.as_bytes())
        .expect("write to child");
    child.wait_with_output().expect("child completes")
}

#[test]
fn fit_degenerate_input_exits_3_with_the_error_name() {
    let out = fit_with_stdin("5 5 5", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate_sample"));
}

#[test]
fn fit_non_integer_token_exits_2() {
    let out = fit_with_stdin("3 x 9", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid token"));
}

#[test]
fn fit_value_below_the_origin_exits_2() {
    let out = fit_with_stdin("0 3 5", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_recovers_seeded_draws_and_reports_the_lattice() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv = stdout(&[
        "sample", "--m", "2", "--k", "2", "--n", "500", "--seed", "11",
    ]);
    let data: String = csv.lines().skip(1).collect::<Vec<_>>().join(" ");
    let path = dir.path().join("draws.txt");
    std::fs::write(&path, data).expect("write data");

    let summary = stdout(&["fit", "--method", "mle", "--input", path.to_str().unwrap()]);
    assert!(summary.starts_with("method=mle "), "summary: {summary}");
    assert!(summary.contains(" lattice=2 "), "summary: {summary}");
    assert!(summary.contains(" k_hat_int=2 "), "summary: {summary}");

    let field = |name: &str| -> f64 {
        summary
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix(name))
            .unwrap_or_else(|| panic!("{name} missing in {summary}"))
            .parse()
            .expect("numeric field")
    };
    let m_hat = field("m_hat=");
    let k_hat = field("k_hat=");
    assert!((1.8..=2.2).contains(&m_hat), "m_hat = {m_hat}");
    assert!((1.7..=2.3).contains(&k_hat), "k_hat = {k_hat}");
}

#[test]
fn fit_json_detail_line_parses() {
    let out = fit_with_stdin("1 3 3 5 7 1 3 9 5 3", &["--json"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let json_line = text.lines().nth(1).expect("json line");
    let detail: serde_json::Value = json_line.parse().expect("valid json");
    assert_eq!(detail["n"], 10);
    assert_eq!(detail["lattice"], 2);
    assert!(detail["solver"]["iterations"].is_u64());
}

#[test]
fn experiment_single_repetition_reports_na_standard_errors() {
    let got = stdout(&[
        "experiment",
        "--m",
        "2",
        "--k",
        "2",
        "--n",
        "100",
        "--reps",
        "1",
        "--seed",
        "5",
    ]);
    let row: Vec<&str> = got
        .lines()
        .nth(1)
        .expect("one cell row")
        .split(',')
        .collect();
    assert_eq!(row[7], "NA");
    assert_eq!(row[9], "NA");
    assert_eq!(row[10], "0");
}

#[test]
fn experiment_emits_one_row_per_cell_in_flag_order() {
    let got = stdout(&[
        "experiment",
        "--method",
        "moments",
        "--m",
        "2,10",
        "--k",
        "1,2",
        "--n",
        "50,100",
        "--reps",
        "3",
        "--seed",
        "5",
    ]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(
        lines[0],
        "m,k,variant,n,reps,method,mean_m_hat,se_m_hat,mean_k_hat,se_k_hat,breakdowns"
    );
    assert!(lines[1].starts_with("2,1,h1,50,3,moments,"));
    assert!(lines[2].starts_with("2,1,h1,100,3,moments,"));
    assert!(lines[3].starts_with("2,2,h1,50,3,moments,"));
    assert!(lines[8].starts_with("10,2,h1,100,3,moments,"));
}

#[test]
fn experiment_bytes_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().expect("tempdir");
    let one = dir.path().join("one.csv");
    let four = dir.path().join("four.csv");
    let base = [
        "experiment",
        "--method",
        "mle",
        "--m",
        "2,10",
        "--k",
        "2",
        "--n",
        "100",
        "--reps",
        "6",
        "--seed",
        "21",
    ];
    stdout(
        &[
            &base[..],
            &["--threads", "1", "--out", one.to_str().unwrap()],
        ]
        .concat(),
    );
    stdout(
        &[
            &base[..],
            &["--threads", "4", "--out", four.to_str().unwrap()],
        ]
        .concat(),
    );
    let a = std::fs::read(&one).expect("read one.csv");
    let b = std::fs::read(&four).expect("read four.csv");
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'), "CSV must use LF line endings");
}

#[test]
fn experiment_different_seed_changes_the_estimates() {
    let base = [
        "experiment",
        "--m",
        "2",
        "--k",
        "2",
        "--n",
        "100",
        "--reps",
        "4",
    ];
    let a = stdout(&[&base[..], &["--seed", "1"]].concat());
    let b = stdout(&[&base[..], &["--seed", "2"]].concat());
    assert_ne!(a, b);
}

#[test]
fn experiment_rejects_sample_size_below_two() {
    let out = harris(&[
        "experiment",
        "--m",
        "2",
        "--k",
        "2",
        "--n",
        "1",
        "--reps",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_required_flag_exits_2() {
    let out = harris(&["pmf", "--m", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_m_exits_2() {
    let out = harris(&["pmf", "--m", "1", "--k", "2", "--rmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("table.csv");
    let streamed = stdout(&["pmf", "--m", "4", "--k", "5", "--rmax", "19"]);
    stdout(&[
        "pmf",
        "--m",
        "4",
        "--k",
        "5",
        "--rmax",
        "19",
        "--out",
        path.to_str().unwrap(),
    ]);
    let filed = std::fs::read_to_string(&path).expect("read file");
    assert_eq!(streamed, filed);
}

#[test]
fn stability_sd_on_h1_fails_by_necessity_with_exit_4() {
    let out = harris(&[
        "stability",
        "--sd",
        "--variant",
        "h1",
        "--m",
        "2",
        "--k",
        "2",
        "--c",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("P(X=0)=0"), "stderr: {err}");
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("sd,variant=h1 m=2 k=2 c=0.5,P(X=0)=0,fail"));
}

#[test]
fn stability_id_slice_passes_with_a_report_row_per_case() {
    let got = stdout(&["stability", "--id", "--m", "2", "--k", "2"]);
    let lines: Vec<&str> = got.lines().collect();
    assert_eq!(lines[0], "check,params,witness,status");
    // two variants x one m x one k x three root orders
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.ends_with(",pass")));
}

#[test]
fn stability_identity_single_cell_reports_a_tiny_residual() {
    let got = stdout(&[
        "stability",
        "--identity",
        "--a",
        "2",
        "--c",
        "1",
        "--k",
        "2",
    ]);
    let row = got.lines().nth(1).expect("identity row");
    assert!(row.starts_with("identity,a=2 c=1 k=2,max_residual="));
    assert!(row.ends_with(",pass"));
}
