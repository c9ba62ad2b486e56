#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-moments"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Synthetic forms with a fabricated completeness claim, only to drive the
/// dataset-consuming subcommands end to end.
pub fn fixture(dir: &Path) -> String {
    let raw = dir.join("raw.maass");
    let out = run(&[
        "synth",
        "--seed",
        "11",
        "--count",
        "12",
        "--t-lo",
        "10",
        "--t-hi",
        "30",
        "--out",
        raw.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&raw).unwrap().replacen(
        "%maass-v1\n",
        "%maass-v1\nwindow 0 40\n",
        1,
    );
    let path = dir.join("fixture.maass");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Runs the command twice with the same `--out` and compares the bytes.
pub fn check_deterministic(dir: &Path, name: &str, args: &[&str]) -> Result<(), String> {
    let out_path = dir.join(format!("{name}.csv"));
    let p = out_path.to_str().unwrap().to_string();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", &p]);
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = run(&full);
        if !out.status.success() {
            return Err(format!(
                "{name} failed: {}",
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        outputs.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
    }
    if outputs[0].is_empty() {
        return Err(format!("{name} wrote nothing"));
    }
    if outputs[0] != outputs[1] {
        return Err(format!("{name} output differs between runs"));
    }
    Ok(())
}

/// One invocation per subcommand.
pub fn every_subcommand(ds: &str) -> Vec<(&'static str, Vec<String>)> {
    let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (
            "kloosterman",
            v(&["kloosterman", "--m", "1", "--n", "-2", "--c-max", "40"]),
        ),
        ("bessel", v(&["bessel", "--t", "3,40", "--x", "0.5,7"])),
        (
            "trace",
            v(&[
                "trace-check",
                "--dataset",
                ds,
                "--T",
                "20",
                "--M",
                "1",
                "--c-max",
                "8",
            ]),
        ),
        (
            "orth",
            v(&[
                "orthogonality",
                "--dataset",
                ds,
                "--T",
                "20",
                "--M",
                "1",
                "--max-mn",
                "3",
            ]),
        ),
        (
            "moments",
            v(&[
                "moments",
                "--dataset",
                ds,
                "--T",
                "20",
                "--M",
                "1",
                "--t",
                "5",
            ]),
        ),
        (
            "zeta",
            v(&[
                "zeta-moments",
                "--T",
                "1000",
                "--n",
                "1",
                "--grid-step",
                "0.05",
            ]),
        ),
        ("ingest", v(&["ingest", "--dataset", ds])),
        ("tally", v(&["tally", "--n", "4", "--primes", "2,3,5"])),
        ("synth", v(&["synth", "--seed", "3", "--count", "5"])),
    ]
}
