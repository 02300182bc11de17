use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fwa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwa"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn assert_single_line_error(out: &Output) {
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with("error: "), "{err}");
}

#[test]
fn simulate_shipped_config_writes_sixty_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rate.csv");
    let cfg = configs().join("fwa_28ghz.toml");
    assert_ok(&fwa(&[
        "simulate",
        "--config",
        s(&cfg),
        "--seed",
        "7",
        "--output",
        s(&out),
    ]));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("distance_m,gamma_q_db,rate_bps,config_label,mode")
    );
    assert_eq!(lines.count(), 60);

    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("rate.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config_digest"].as_str().unwrap().len(), 64);

    let again = dir.path().join("again.csv");
    assert_ok(&fwa(&[
        "simulate",
        "--config",
        s(&cfg),
        "--seed",
        "7",
        "--output",
        s(&again),
    ]));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn simulate_mode_all_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("modes.csv");
    let rep = dir.path().join("modes_report.csv");
    assert_ok(&fwa(&[
        "simulate",
        "--seed",
        "1",
        "--mode",
        "all",
        "--distances",
        "50:200:50",
        "--links",
        "1000",
        "--output",
        s(&out),
    ]));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1 + 3 * 4);
    assert_ok(&fwa(&["report", "--input", s(&out), "--output", s(&rep)]));
    let table = fs::read_to_string(&rep).unwrap();
    let modes: Vec<&str> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(modes, ["none", "fixed_offset", "sampled"]);
}

#[test]
fn fit_recovers_same_street_slope() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("points.csv");
    let cat = dir.path().join("fitted.toml");
    assert_ok(&fwa(&[
        "synth",
        "--model",
        "same_street",
        "--seed",
        "2",
        "--output",
        s(&pts),
    ]));
    assert_eq!(fs::read_to_string(&pts).unwrap().lines().count(), 1 + 1764);
    assert_ok(&fwa(&[
        "fit",
        "--input",
        s(&pts),
        "--output",
        s(&cat),
        "--name",
        "ss",
    ]));
    let table: toml::Table = fs::read_to_string(&cat).unwrap().parse().unwrap();
    let slope = table["ss"]["slope"].as_float().unwrap();
    let ci = table["ss"]["ci_slope"].as_float().unwrap();
    assert!((slope + 4.06).abs() < 0.2, "slope {slope}");
    assert!(ci > 0.0 && ci < 0.2);
    let residuals = fs::read_to_string(dir.path().join("fitted.residuals.csv")).unwrap();
    assert_eq!(residuals.lines().count(), 1 + 1764);
}

#[test]
fn fit_with_fixed_intercept() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("los.csv");
    let cat = dir.path().join("los.toml");
    assert_ok(&fwa(&[
        "synth",
        "--model",
        "visual_los",
        "--distances",
        "20:200:2",
        "--seed",
        "4",
        "--output",
        s(&pts),
    ]));
    assert_ok(&fwa(&[
        "fit",
        "--input",
        s(&pts),
        "--output",
        s(&cat),
        "--name",
        "los",
        "--fixed-intercept",
        "-61.4",
    ]));
    let table: toml::Table = fs::read_to_string(&cat).unwrap().parse().unwrap();
    assert_eq!(table["los"]["intercept_db"].as_float(), Some(-61.4));
    assert!((table["los"]["slope"].as_float().unwrap() + 2.44).abs() < 0.3);
}

#[test]
fn metrics_on_five_turn_record_warns() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.toml");
    fs::write(
        &scene,
        "link_id = \"short\"\nscenario = \"same_street\"\ndistance_m = 60.0\npath_gain_db = -95.0\n\
         specular_paths = [{ azimuth_deg = 90.0, relative_power_db = 0.0 }]\n\
         turns = 5\nrpm = 300.0\nsample_rate_hz = 740.0\n",
    )
    .unwrap();
    let scan = dir.path().join("scan.csv");
    let metrics = dir.path().join("metrics.csv");
    assert_ok(&fwa(&[
        "synth",
        "--config",
        s(&scene),
        "--seed",
        "1",
        "--output",
        s(&scan),
    ]));
    assert_ok(&fwa(&[
        "metrics",
        "--input",
        s(&scan),
        "--output",
        s(&metrics),
    ]));
    let mut rdr = csv::Reader::from_path(&metrics).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "link_id",
            "distance_m",
            "scenario",
            "path_gain_db",
            "eff_azim_gain_db",
            "k_factor_db",
            "fluct_p90_db",
            "beamswitch_gain_db",
            "warnings"
        ]
    );
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "short");
    assert!(row[8].contains("insufficient turns"), "{}", &row[8]);
    let pg: f64 = row[3].parse().unwrap();
    assert!((pg + 95.0).abs() < 0.2);
}

#[test]
fn shipped_scenes_run_through_metrics_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.json");
    let metrics = dir.path().join("m.csv");
    let psd = dir.path().join("psd");
    let report = dir.path().join("r.csv");
    let scenes = configs().join("scenes.toml");
    let sounder = configs().join("sounder_28ghz.toml");
    assert_ok(&fwa(&[
        "synth",
        "--config",
        s(&scenes),
        "--sounder",
        s(&sounder),
        "--seed",
        "9",
        "--output",
        s(&scan),
    ]));
    assert_ok(&fwa(&[
        "metrics",
        "--input",
        s(&scan),
        "--config",
        s(&sounder),
        "--output",
        s(&metrics),
        "--psd-dir",
        s(&psd),
    ]));
    assert_eq!(fs::read_dir(&psd).unwrap().count(), 1);
    assert_ok(&fwa(&[
        "report",
        "--input",
        s(&metrics),
        "--output",
        s(&report),
    ]));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("scenario,metric,count,mean,std,p10,p50,p90"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("same_street,k_factor_db,1,")));
}

#[test]
fn tworay_default_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tr.csv");
    let geom = configs().join("open_field.toml");
    assert_ok(&fwa(&["tworay", "--config", s(&geom), "--output", s(&out)]));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let excess: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    assert_eq!(excess.len(), 361);
    assert!(excess.iter().cloned().fold(f64::MIN, f64::max) > 4.0);
}

#[test]
fn errors_are_single_line_and_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "link_id,street_id,scenario,distance_m\nx,s,same_street,50\n\
         time_s,azimuth_deg,power_dbm,turn_index\n0,10,-60,0\n0.1,400,-60,0\n",
    )
    .unwrap();
    let out = dir.path().join("m.csv");
    let res = fwa(&["metrics", "--input", s(&bad), "--output", s(&out)]);
    assert_single_line_error(&res);
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error: parse: "));
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(leftovers, ["bad.csv"]);

    let res = fwa(&[
        "simulate",
        "--seed",
        "1",
        "--model",
        "nope",
        "--output",
        s(&out),
    ]);
    assert_single_line_error(&res);
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error: unknown_model: "));
    assert!(!out.exists());

    let res = fwa(&[
        "simulate",
        "--seed",
        "1",
        "--links",
        "5",
        "--output",
        s(&out),
    ]);
    assert_single_line_error(&res);

    let res = fwa(&[
        "metrics",
        "--input",
        s(&dir.path().join("missing.csv")),
        "--output",
        s(&out),
    ]);
    assert_single_line_error(&res);
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error: io: "));
}

#[test]
fn unknown_flags_and_missing_seed_rejected() {
    assert!(!fwa(&["tworay", "--output", "x.csv", "--frobnicate"])
        .status
        .success());
    assert!(
        !fwa(&["synth", "--model", "same_street", "--output", "x.csv"])
            .status
            .success()
    );
}

#[test]
fn help_lists_every_flag() {
    let expected: &[(&str, &[&str])] = &[
        ("metrics", &["--input", "--output", "--config", "--psd-dir"]),
        (
            "fit",
            &[
                "--input",
                "--output",
                "--residuals",
                "--name",
                "--fixed-intercept",
                "--scenario",
            ],
        ),
        (
            "synth",
            &[
                "--config",
                "--sounder",
                "--model",
                "--catalog",
                "--distances",
                "--points",
                "--seed",
                "--output",
            ],
        ),
        (
            "tworay",
            &["--config", "--distances", "--beams", "--output"],
        ),
        (
            "simulate",
            &[
                "--config",
                "--catalog",
                "--model",
                "--mode",
                "--distances",
                "--links",
                "--quantile",
                "--seed",
                "--threads",
                "--output",
            ],
        ),
        ("report", &["--input", "--output", "--at"]),
    ];
    for (cmd, flags) in expected {
        let out = fwa(&[cmd, "--help"]);
        assert_ok(&out);
        let help = String::from_utf8_lossy(&out.stdout);
        for f in *flags {
            assert!(help.contains(f), "{cmd} --help lacks {f}");
        }
    }
}
