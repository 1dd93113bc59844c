use std::process::{Command, Output};

fn speckit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_speckit"))
        .args(args)
        .env_remove("SPECKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

const DAHLQUIST: &[&str] = &["--builtin", "dahlquist", "--lambda", "-3", "--u0", "1", "--T", "2.5"];

#[test]
fn solve_writes_one_row_per_node() {
    let mut args = vec!["solve", "-q"];
    args.extend_from_slice(DAHLQUIST);
    args.extend_from_slice(&["--scheme", "ee", "--h", "0.1"]);
    let o = speckit(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 27);
    assert_eq!(lines[0], "t,u,exact,error,fp_iters");
    assert_eq!(lines[1], "0.00000e0,1.00000e0,1.00000e0,0.00000e0,0");
    assert_eq!(lines[2], "1.00000e-1,7.00000e-1,7.40818e-1,4.08182e-2,0");
    assert!(lines[26].starts_with("2.50000e0,"));
    assert!(o.stderr.is_empty());
}

#[test]
fn output_is_byte_stable() {
    let args = ["table", "dahlquist", "-q", "--k-max", "8", "--format", "csv"];
    let a = speckit(&args);
    let b = speckit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_speckit"))
            .args(["table", "circle", "-q", "--k-max", "9"])
            .env("SPECKIT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn banner_goes_to_stderr() {
    let o = speckit(&["probe", "fermat", "--expr", "x^2", "--x", "0"]);
    assert!(stderr(&o).starts_with("speckit "));
    assert!(stdout(&o).starts_with("probe=fermat"));
}

#[test]
fn unknown_scheme_lists_valid_ones() {
    let o = speckit(&["solve", "--builtin", "circle", "--T", "0.9", "--scheme", "se9", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("se9"));
    assert!(err.contains("ee, ie, cn, st, se1, se2, se3, se4, se5, se6"));
}

#[test]
fn usage_errors_exit_2() {
    let o = speckit(&["sweep", "--builtin", "circle", "--T", "0.9", "--schemes", "ee", "--k-min", "6", "--k-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = speckit(&["solve", "--builtin", "circle", "--T", "1.5", "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = speckit(&["solve", "--builtin", "nowhere", "--T", "1", "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = speckit(&["solve", "--builtin", "dahlquist", "--T", "1", "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = speckit(&["probe", "fermat", "--expr", "x +* 2", "--x", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "builtin = \"circle\"\nT = 0.9\nbogus = 1\n").unwrap();
    let o = speckit(&["solve", "--config", path.to_str().unwrap(), "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column 1"));

    std::fs::write(&path, "source = \"-u + sin(\"\nexact = \"exp(-t)\"\nu0 = 1\nT = 1\n").unwrap();
    let o = speckit(&["solve", "--config", path.to_str().unwrap(), "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn custom_config_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("decay.toml");
    std::fs::write(&path, "name = \"decay\"\nsource = \"-u\"\nexact = \"exp(-t)\"\nu0 = 1\nT = 1\n").unwrap();
    let out = dir.path().join("sweep.csv");
    let o = speckit(&[
        "sweep", "-q", "--config", path.to_str().unwrap(), "--schemes", "cn,se5", "--k-min", "3", "--k-max", "6",
        "-o", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "problem,scheme,p,N,h,E,R");
    assert_eq!(rows.len(), 9);
    assert!(rows[1].starts_with("decay,cn,inf,8,1.25000e-1,"));
    assert!(rows[1].ends_with(','));
    let ratio: f64 = rows[4].rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
}

#[test]
fn step_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blowup.toml");
    std::fs::write(&path, "source = \"u^2\"\nu0 = 1\nT = 5\n").unwrap();
    let o = speckit(&["solve", "--config", path.to_str().unwrap(), "--scheme", "ee", "--h", "0.1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("step"));
}

#[test]
fn iteration_cap_warns() {
    let o = speckit(&["solve", "--builtin", "circle", "--T", "0.9", "--scheme", "se5", "--h", "0.125", "--max-iters", "1"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: fixed-point iteration reached the cap"));
}

#[test]
fn fermat_probes() {
    let o = speckit(&["probe", "fermat", "-q", "--expr", "x^2", "--x", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "value"), "0.00000e0");
    assert_eq!(field(&text, "pass"), "true");

    let o = speckit(&["probe", "fermat", "-q", "--builtin", "kink", "--x", "0"]);
    let value: f64 = field(&stdout(&o), "value").parse().unwrap();
    assert!((value - (10f64.sqrt() - 3.0)).abs() < 1e-5, "{value}");
}

#[test]
fn mvt_and_rolle_brackets() {
    let o = speckit(&["probe", "mvt", "-q", "--expr", "abs(x-0.5)", "--a", "0", "--b", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "target"), "0.00000e0");
    let lower: f64 = field(&text, "lower_value").parse().unwrap();
    let upper: f64 = field(&text, "upper_value").parse().unwrap();
    assert!(lower <= 1e-6 && upper >= -1e-6);

    let o = speckit(&["probe", "rolle", "-q", "--expr", "x^3-x", "--a", "-1", "--b", "1", "--grid-n", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("no bracket"));
}

#[test]
fn lipschitz_probe() {
    let o = speckit(&["probe", "lipschitz", "-q", "--builtin", "relu", "--a", "-1", "--b", "1", "--M", "1"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "pass"), "true");
    let o = speckit(&["probe", "lipschitz", "-q", "--expr", "3*x", "--a", "0", "--b", "1", "--M", "1"]);
    assert_eq!(field(&stdout(&o), "pass"), "false");
}

#[test]
fn markdown_table_round_trips() {
    let o = speckit(&["table", "nonsmooth", "-q", "--k-min", "3", "--k-max", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("problem: nonsmooth"));
    let reports = specular::harness::parse_markdown(&text).unwrap();
    assert_eq!(reports.len(), 25);
    assert_eq!(specular::harness::reports_to_markdown(&reports).unwrap(), text);
}

#[test]
fn svg_outputs() {
    let o = speckit(&["solve", "-q", "--builtin", "circle", "--T", "0.9", "--scheme", "st", "--h", "0.05", "--format", "svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("exact"));
    let o = speckit(&["table", "circle", "-q", "--k-max", "6", "--format", "svg"]);
    assert_eq!(stdout(&o).matches("<polyline").count(), 5);
}
