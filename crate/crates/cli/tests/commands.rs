use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args(args)
        .env_remove("QDM_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_state(dir: &Path, name: &str, dims: [usize; 2], entries: &[f64]) -> String {
    let matrix: Vec<[f64; 2]> = entries.iter().map(|&x| [x, 0.0]).collect();
    let text = serde_json::json!({ "dims": dims, "matrix": matrix }).to_string();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn measures_on_discordant_probe() {
    let v = json(&qdm(&["measures", "--preset", "rho_q", "--p", "0.8"]));
    let qip_raw = v["qip_raw"].as_f64().unwrap();
    assert!(qip_raw <= 0.64 + 1e-12, "{qip_raw}");
    assert!((v["qip_normalized"].as_f64().unwrap() - qip_raw / 4.0).abs() < 1e-15);
    assert!(v["lqu"].as_f64().unwrap() > 0.1);
    assert!(v["discord_entropic"].as_f64().unwrap() > 0.0);
    assert!((v["purity"].as_f64().unwrap() - 0.25 * 1.64f64.powi(2)).abs() < 1e-12);
    for key in ["lqu", "qip", "discord_entropic"] {
        let d = v["minimizers"][key]["direction"].as_array().unwrap();
        let norm: f64 = d.iter().map(|x| x.as_f64().unwrap().powi(2)).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }
    assert!(v["minimizers"]["lqu"]["oracle_gap"].as_f64().unwrap() < 1e-4);
}

#[test]
fn measures_on_classical_probe_vanish() {
    let v = json(&qdm(&["measures", "--preset", "rho_c", "--p", "0.5"]));
    assert!(v["lqu"].as_f64().unwrap() <= 1e-8);
    assert!(v["qip_raw"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn measures_from_file_and_side_b() {
    let dir = tempfile::tempdir().unwrap();
    let half = 0.5;
    let bell = write_state(
        dir.path(),
        "bell.json",
        [2, 2],
        &[
            half, 0., 0., half, 0., 0., 0., 0., 0., 0., 0., 0., half, 0., 0., half,
        ],
    );
    let v = json(&qdm(&["measures", "--state", &bell, "--side", "b"]));
    assert_eq!(v["side"], "B");
    assert!((v["lqu"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["mutual_information"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["source"]["file"].as_str().unwrap(), bell);
}

#[test]
fn measures_reports_scaled_spectrum() {
    let base = json(&qdm(&[
        "measures",
        "--preset",
        "rho_q",
        "--p",
        "0.6",
        "--no-oracle",
    ]));
    let scaled = json(&qdm(&[
        "measures",
        "--preset",
        "rho_q",
        "--p",
        "0.6",
        "--spectrum",
        "-1,3",
        "--no-oracle",
    ]));
    let ratio = scaled["lqu"].as_f64().unwrap() / base["lqu"].as_f64().unwrap();
    assert!((ratio - 4.0).abs() < 1e-9);
    assert!(base["minimizers"]["lqu"]["oracle_gap"].is_null());
}

#[test]
fn invalid_states_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let non_psd = write_state(
        dir.path(),
        "neg.json",
        [2, 2],
        &[
            1.0, 0., 0., 0., 0., 0., 0., 0., 0., 0., -0.5, 0., 0., 0., 0., 0.5,
        ],
    );
    let out = qdm(&["measures", "--state", &non_psd]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("negative eigenvalue"));

    let bad_trace = write_state(dir.path(), "trace.json", [1, 2], &[1.0, 0.0, 0.0, 1.0]);
    let out = qdm(&["measures", "--state", &bad_trace]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("trace"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(
        qdm(&["measures", "--state", garbage.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        qdm(&["measures", "--preset", "rho_q", "--p", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dimension_and_spectrum_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let short = write_state(dir.path(), "short.json", [2, 2], &[1.0, 0.0, 0.0, 0.0]);
    assert_eq!(qdm(&["measures", "--state", &short]).status.code(), Some(3));
    let spectra = [
        ["--spectrum", "1,1"],
        ["--spectrum", "-1,0,1"],
        ["--spectrum", "a,b"],
    ];
    for args in spectra {
        let out = qdm(&["measures", "--preset", "bell", args[0], args[1]]);
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn missing_file_exits_4() {
    let out = qdm(&["measures", "--state", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_csv_matches_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let out = qdm(&[
        "sweep",
        "--preset",
        "rho_q",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "p,qfi_x,qfi_y,qfi_z,qfi_diag,qip_raw,qip_normalized,lqu,discord_entropic,purity"
    );
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    for row in &rows {
        for cell in row {
            // exactly what was printed comes back, and printing it again is stable
            let x: f64 = cell.parse().unwrap();
            assert!(x.is_finite());
            assert_eq!(format!("{x:.16e}"), *cell);
        }
        let v: Vec<f64> = row.iter().map(|c| c.parse().unwrap()).collect();
        for q in &v[1..5] {
            assert!(v[5] <= q + 1e-9);
        }
    }
    let half: Vec<f64> = rows[50].iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(half[0], 0.5);
    for (got, want) in half[1..5].iter().zip([0.25, 0.4, 0.25, 0.325]) {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    let zero: Vec<f64> = rows[0].iter().map(|c| c.parse().unwrap()).collect();
    assert!(zero[1..9].iter().all(|x| x.abs() < 1e-12));
    assert_eq!(zero[9], 0.25);
}

#[test]
fn sweep_json_for_classical_probe() {
    let out = qdm(&[
        "sweep", "--preset", "rho_c", "--p-grid", "0.5", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["preset"], "rho_c");
    let row = &v["rows"][0];
    assert!(row["qfi_x"].as_f64().unwrap().abs() < 1e-8);
    assert!((row["qfi_y"].as_f64().unwrap() - 0.4).abs() < 1e-8);
    assert!((row["qfi_z"].as_f64().unwrap() - 0.4).abs() < 1e-8);
    assert!((row["qfi_diag"].as_f64().unwrap() - 0.2).abs() < 1e-8);
}

#[test]
fn sweep_errors() {
    let out = qdm(&[
        "sweep",
        "--preset",
        "rho_q",
        "--points",
        "3",
        "-o",
        "/no/such/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(
        qdm(&["sweep", "--preset", "rho_q", "--p-grid", "0,1.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qdm(&["sweep", "--preset", "rho_q", "--p-grid", "0,x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn estimate_saturates_bound() {
    let args = [
        "estimate",
        "--preset",
        "rho_q",
        "--p",
        "0.9",
        "--direction",
        "z",
        "--shots",
        "10000",
        "--seed",
        "42",
    ];
    let v = json(&qdm(&args));
    let ratio = v["variance_to_crb"].as_f64().unwrap();
    assert!((0.75..=1.25).contains(&ratio), "{ratio}");
    assert_eq!(v["batch_estimates"].as_array().unwrap().len(), 100);
    let hist: u64 = v["outcome_histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(hist, 10_000);
}

#[test]
fn estimate_rejects_insensitive_probe() {
    let out = qdm(&[
        "estimate",
        "--preset",
        "rho_c",
        "--p",
        "0.5",
        "--direction",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("probe insensitive to this phase direction"));
    let out = qdm(&[
        "estimate",
        "--preset",
        "maximally_mixed",
        "--direction",
        "1,1,0",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn seed_comes_from_environment_when_flag_absent() {
    let base = [
        "estimate",
        "--preset",
        "rho_q",
        "--p",
        "0.7",
        "--shots",
        "2000",
        "--batches",
        "5",
    ];
    let flagged = qdm(&[&base[..], &["--seed", "9"]].concat());
    let from_env = Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args(base)
        .env("QDM_SEED", "9")
        .output()
        .unwrap();
    assert!(flagged.status.success());
    assert_eq!(flagged.stdout, from_env.stdout);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args([&base[..], &["--seed", "9"]].concat())
        .env("QDM_SEED", "10")
        .output()
        .unwrap();
    assert_eq!(flagged.stdout, flag_wins.stdout);
    assert_ne!(flagged.stdout, qdm(&base).stdout);
}

#[test]
fn check_selector_runs_only_oracle() {
    let out = qdm(&["check", "--suite", "oracle"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let props: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(props.len(), 2);
    assert!(props
        .iter()
        .all(|l| l.contains("oracle/") && l.contains("worst=")));
}

#[test]
fn full_check_passes() {
    let out = qdm(&["check"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    for suite in [
        "inequality-chain",
        "oracle",
        "local-unitary",
        "monotonicity",
        "symmetry",
        "cq-zero",
    ] {
        assert!(
            text.contains(&format!("PASS  {suite}/")),
            "{suite} missing:\n{text}"
        );
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn corrupted_qfi_is_caught() {
    let out = qdm(&["check", "--qfi-scale", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines()
            .any(|l| l.starts_with("FAIL  inequality-chain/")),
        "{text}"
    );
}

#[test]
fn unknown_names_are_usage_errors() {
    assert_eq!(qdm(&["sweep", "--preset", "rho_z"]).status.code(), Some(2));
    assert_eq!(
        qdm(&["check", "--suite", "everything"]).status.code(),
        Some(2)
    );
}
