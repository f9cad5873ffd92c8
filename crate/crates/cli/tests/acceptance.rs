//! CLI acceptance: byte-identical reruns, the exit-status contract, and
//! config-file precedence.

use std::path::Path;
use std::process::Command;

fn oscbif() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscbif"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// 11. Identical configs produce byte-identical outputs, across every
///     command and with parallelism capped differently between runs.
#[test]
fn acceptance_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);

    let runs: Vec<(Vec<String>, Vec<&str>)> = vec![
        (
            vec![
                "diagram", "--family", "sine_u", "--r", "1", "--L", "1", "--n-min", "1",
                "--n-max", "3", "--grid", "33", "--tol", "1e-9",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            vec!["diag.csv", "diag.svg"],
        ),
        (
            vec![
                "lambda-seq", "--family", "inverse_sine_u", "--r", "2", "--L", "1", "--n-min",
                "1", "--n-max", "12", "--grid", "17", "--tol", "1e-7",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            vec!["seq.csv"],
        ),
        (
            vec![
                "profile", "--family", "sine_u", "--r", "0", "--L", "1", "--nu", "7.85", "--samples",
                "64",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            vec!["prof.csv", "prof.svg"],
        ),
        (
            vec!["verify", "--suite", "oracle", "--seed", "7"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec!["report.json"],
        ),
    ];

    for (args, outputs) in &runs {
        let mut snapshots: Vec<Vec<Vec<u8>>> = Vec::new();
        for (round, threads) in ["1", "2"].iter().enumerate() {
            let mut cmd = oscbif();
            cmd.env("OSCBIF_THREADS", threads);
            cmd.args(args);
            match args[0].as_str() {
                "diagram" => {
                    cmd.args(["--out", p("diag.csv").to_str().unwrap()]);
                    cmd.args(["--svg", p("diag.svg").to_str().unwrap()]);
                }
                "lambda-seq" => {
                    cmd.args(["--out", p("seq.csv").to_str().unwrap()]);
                }
                "profile" => {
                    cmd.args(["--out", p("prof.csv").to_str().unwrap()]);
                    cmd.args(["--svg", p("prof.svg").to_str().unwrap()]);
                }
                "verify" => {
                    cmd.args(["--out", p("report.json").to_str().unwrap()]);
                }
                _ => unreachable!(),
            }
            let status = cmd.status().unwrap();
            assert!(status.success(), "round {round}: {args:?} exited {status}");
            snapshots.push(outputs.iter().map(|name| read(&p(name))).collect());
        }
        for (name, (a, b)) in outputs.iter().zip(snapshots[0].iter().zip(&snapshots[1])) {
            assert!(!a.is_empty(), "{name} is empty");
            assert_eq!(a, b, "{name} differs between identical runs of {args:?}");
        }
    }
    println!("[PASS] criterion 11: byte-identical outputs across reruns (diagram, lambda-seq, profile, verify)");
}

/// Exit status is 0 exactly when everything succeeded.
#[test]
fn exit_status_contract() {
    let dir = tempfile::tempdir().unwrap();

    // config validation failure
    let st = oscbif()
        .args(["diagram", "--family", "sine_u", "--r", "1"])
        .status()
        .unwrap();
    assert!(!st.success(), "missing --L and --out must fail");

    let st = oscbif()
        .args(["diagram", "--family", "nope", "--L", "1", "--out"])
        .arg(dir.path().join("x.csv"))
        .status()
        .unwrap();
    assert!(!st.success(), "unknown family must fail");

    let st = oscbif().args(["verify", "--suite", "unknown"]).status().unwrap();
    assert!(!st.success(), "unknown suite must fail");

    // success path
    let st = oscbif()
        .args(["lambda-seq", "--family", "sine_u", "--r", "1", "--L", "1", "--n-max", "3", "--grid", "17", "--tol", "1e-7", "--out"])
        .arg(dir.path().join("ok.csv"))
        .status()
        .unwrap();
    assert!(st.success());
}

/// Command-line flags override the config file; file values fill the rest.
#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "family=sine_u\nr=2.0\nL=1.0\nn_min=1\nn_max=4\ngrid=17\ntol=1e-7\n",
    )
    .unwrap();

    let out_file = dir.path().join("file.csv");
    let st = oscbif()
        .args(["lambda-seq", "--config", conf.to_str().unwrap(), "--out", out_file.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    let from_file = String::from_utf8(read(&out_file)).unwrap();
    assert_eq!(from_file.lines().count(), 5, "header + 4 windows");

    // --n-max on the command line overrides the file's 4
    let out_cli = dir.path().join("cli.csv");
    let st = oscbif()
        .args([
            "lambda-seq",
            "--config",
            conf.to_str().unwrap(),
            "--n-max",
            "2",
            "--out",
            out_cli.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(st.success());
    let from_cli = String::from_utf8(read(&out_cli)).unwrap();
    assert_eq!(from_cli.lines().count(), 3, "header + 2 windows");

    // shared rows agree exactly
    for (a, b) in from_file.lines().zip(from_cli.lines()) {
        assert_eq!(a, b);
    }
}
