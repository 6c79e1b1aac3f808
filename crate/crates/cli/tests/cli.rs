//! End-to-end checks of the `comblink` binary: table shapes, marker rows,
//! exit codes, and byte-level determinism of the emitted CSV/SVG files.

use std::process::{Command, Output};

use comblink_core::{synthesize_soliton_comb, write_comb_csv, SolitonCombParams};

fn comblink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comblink"))
        .args(args)
        .output()
        .expect("spawning the comblink binary")
}

fn run_ok(args: &[&str]) -> String {
    let out = comblink(args);
    assert!(
        out.status.success(),
        "`comblink {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is UTF-8")
}

fn rows(table: &str) -> Vec<Vec<String>> {
    table.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn num(field: &str) -> f64 {
    field.parse().unwrap_or_else(|_| panic!("expected a number, got `{field}`"))
}

#[test]
fn thresholds_reports_format_requirements() {
    let table = run_ok(&["thresholds"]);
    assert_eq!(table.lines().next(), Some("format,required_osnr_db,net_rate_bps"));
    let rows = rows(&table);
    assert_eq!(rows.len(), 2);

    let (r16, r64) = (&rows[0], &rows[1]);
    assert_eq!(r16[0], "16qam-56gbd");
    assert!((num(&r16[1]) - 20.13).abs() < 0.05, "16QAM OSNR: {}", r16[1]);
    assert!((num(&r16[2]) / 400e9 - 1.0).abs() < 0.01, "16QAM rate: {}", r16[2]);
    assert_eq!(r64[0], "64qam-56gbd");
    assert!((num(&r64[1]) - 25.94).abs() < 0.05, "64QAM OSNR: {}", r64[1]);
    assert!((num(&r64[2]) / 600e9 - 1.0).abs() < 0.01, "64QAM rate: {}", r64[2]);
}

#[test]
fn config_prints_default_document() {
    let doc = run_ok(&["config", "--print-defaults"]);
    for expected in [
        r#""b_ref_hz": 12500000000.0"#,
        r#""launch_power_dbm": 0.0"#,
        r#""mod_loss_db": -25.0"#,
        r#""span_loss_db": -15.0"#,
        r#""span_count": 1"#,
        r#""center_wavelength_m": 1.55e-6"#,
        r#""capacity_pol_factor": 1.0"#,
    ] {
        assert!(doc.contains(expected), "missing `{expected}` in:\n{doc}");
    }
}

#[test]
fn sweep_power_blocks_end_with_transition_markers() {
    let table = run_ok(&["sweep-power", "--spans", "2,40", "--pline-dbm", "-30:-28:1"]);
    assert_eq!(table.lines().next(), Some("p_line_dbm,spans,osnr_db,marker"));
    let rows = rows(&table);
    assert_eq!(rows.len(), 8, "3 grid rows + 1 marker row per span count");

    for (i, row) in rows.iter().enumerate() {
        let is_marker = i % 4 == 3;
        assert_eq!(row[3], if is_marker { "transition" } else { "" }, "row {i}");
        if is_marker {
            let p_dbm = num(&row[0]);
            assert!((-26.0..=-13.0).contains(&p_dbm), "threshold {p_dbm} dBm out of band");
        }
    }
    assert_eq!(rows[3][1], "2");
    assert_eq!(rows[7][1], "40");
    assert!(num(&rows[3][0]) > num(&rows[7][0]), "threshold must drop with distance");
}

#[test]
fn transition_table_spans_expected_bands() {
    let table = run_ok(&["transition", "--spans", "1:40"]);
    let rows = rows(&table);
    assert_eq!(rows.len(), 40);

    let mut last_power = f64::INFINITY;
    for row in &rows {
        let spans: u32 = row[0].parse().unwrap();
        let p_dbm = num(&row[1]);
        let ocnr_db = num(&row[3]);
        assert!(p_dbm < last_power, "power threshold must fall with span count");
        last_power = p_dbm;
        if spans >= 2 {
            assert!((-26.0..=-13.0).contains(&p_dbm), "{spans} spans: {p_dbm} dBm");
        }
        assert!((24.0..=41.0).contains(&ocnr_db), "{spans} spans: {ocnr_db} dB");
    }
}

#[test]
fn comb_file_round_trip_drives_comb_map() {
    let dir = tempfile::tempdir().unwrap();
    let comb_path = dir.path().join("soliton.csv");
    let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
    write_comb_csv(&comb, &comb_path).unwrap();

    let table = run_ok(&[
        "comb-map",
        "--comb-file",
        comb_path.to_str().unwrap(),
        "--spans",
        "1,130",
        "--scheme",
        "no-eq,gain-eq",
    ]);
    let rows = rows(&table);
    assert_eq!(rows.len(), 2 * 2 * 110, "schemes × span counts × comb lines");
    assert_eq!(rows[0][0], "no-eq");
    assert_eq!(num(&rows[0][2]), 75.0);
    assert_eq!(rows[0][3], "-55");
    let last = rows.last().unwrap();
    assert_eq!(last[0], "gain-eq");
    assert_eq!(num(&last[2]), 9750.0);
    assert_eq!(last[3], "54");
}

#[test]
fn capacity_row_matches_the_library() {
    use comblink_core::{capacity_vs_distance, CapacityMode, EqualizationScheme, LinkConfig};

    let table = run_ok(&["capacity", "--spans", "130", "--scheme", "gain-eq", "--mode", "optimal"]);
    let rows = rows(&table);
    assert_eq!(rows.len(), 1);

    let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
    let expected = capacity_vs_distance(
        &comb,
        &LinkConfig::default(),
        &[EqualizationScheme::GainEq],
        &[CapacityMode::PerChannelOptimal],
        &[130],
    )
    .unwrap();
    assert_eq!(rows[0][4], format!("{:.8e}", expected[0].total));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|i| (dir.path().join(format!("run{i}.csv")), dir.path().join(format!("run{i}.svg"))))
        .collect();
    for (csv, svg) in &paths {
        run_ok(&[
            "sweep-power",
            "--spans",
            "2,10,40",
            "--pline-dbm",
            "-40:0:0.5",
            "--out",
            csv.to_str().unwrap(),
            "--plot",
            svg.to_str().unwrap(),
        ]);
    }
    let csv0 = std::fs::read(&paths[0].0).unwrap();
    let csv1 = std::fs::read(&paths[1].0).unwrap();
    assert_eq!(csv0, csv1, "CSV output must be byte-identical across runs");
    let svg0 = std::fs::read(&paths[0].1).unwrap();
    let svg1 = std::fs::read(&paths[1].1).unwrap();
    assert_eq!(svg0, svg1, "SVG output must be byte-identical across runs");
    assert!(!csv0.is_empty() && !svg0.is_empty());
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = comblink(&["sweep-power", "--pline-dbm", "1:2:nope"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--pline-dbm"), "stderr: {stderr}");
}

#[test]
fn runtime_errors_exit_with_code_1_and_name_the_input() {
    let out = comblink(&["capacity", "--config", "/nonexistent/link.json"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/nonexistent/link.json"), "stderr: {stderr}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "index,frequency_hz,power_dbm,ocnr_db\n0,193.4e12,not-a-power,\n").unwrap();
    let out = comblink(&["comb-map", "--comb-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}
