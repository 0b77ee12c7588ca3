mod common;

use common::{cli, config_text, small_swarm, write_config};
use hybrid_link::tsv::NumericTable;

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn validate_reports_channel_counts() {
    let cfg = common::repo().join("configs/scl.toml");
    let out = cli(&["--config", cfg.to_str().unwrap(), "validate"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("SCL: 127 channels (L 44, C 29, S 54)"), "{stdout}");
    assert!(stdout.contains("CL: 73 channels"), "{stdout}");
    assert!(stdout.contains("sweep: 72 scenarios"), "{stdout}");
}

#[test]
fn unknown_band_exits_one_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = config_text("cl.toml").replace(r#"bands = ["C", "L"]"#, r#"bands = ["C", "X"]"#);
    let path = write_config(dir.path(), &bad);
    let out = cli(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("grid.bands[1]"), "{}", text(&out.stderr));

    let bad = config_text("cl.toml").replace("[amplifiers.L]", "[amplifiers.Q]");
    let path = write_config(dir.path(), &bad);
    let out = cli(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("amplifiers.Q"), "{}", text(&out.stderr));
}

#[test]
fn schema_violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = config_text("cl.toml").replace("length_km = 80.0", "length_km = 80.0\nlenght = 3");
    let path = write_config(dir.path(), &bad);
    let out = cli(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("lenght"), "{}", text(&out.stderr));

    let missing = config_text("cl.toml").replace("pce_c_band.tsv", "no_such_curve.tsv");
    let path = write_config(dir.path(), &missing);
    let out = cli(&["--config", path.to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("no_such_curve.tsv"), "{}", text(&out.stderr));
}

#[test]
fn lumped_cl_single_span_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &config_text("cl.toml"));
    let out_dir = dir.path().join("out");
    let out = cli(&["--config", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(), "run"]);
    assert!(out.status.success(), "{}", text(&out.stderr));

    assert!(text(&out.stdout).contains("CL-1span-0pump-8W\ttotal\t73\t"));
    let ledger = std::fs::read_to_string(out_dir.join("CL-1span-0pump-8W_ledger.tsv")).unwrap();
    let rows: Vec<Vec<&str>> = ledger
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() == 0.0));
    let quality = std::fs::read_to_string(out_dir.join("CL-1span-0pump-8W_quality.tsv")).unwrap();
    assert_eq!(quality.lines().filter(|l| !l.starts_with('#')).count(), 1 + 73);
    assert!(quality.starts_with("# hybrid-link-tsv v1\n"));
}

#[test]
fn solver_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_text("cl.toml")
        .replace("max_iterations = 300", "max_iterations = 1")
        .replace("pump_count = 0", "pumps = [[1420.0, 250.0], [1450.0, 250.0]]");
    let path = write_config(dir.path(), &cfg);
    let out_dir = dir.path().join("out");
    let out = cli(&["--config", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(), "run"]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("did not converge"));
}

#[test]
fn optimize_writes_trace_and_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_swarm(&config_text("cl.toml"), 4, 3)
        .replace("pump_count = 0", "pump_count = 1")
        .replace("n_span = 1", "n_span = 10");
    let path = write_config(dir.path(), &cfg);
    let out_dir = dir.path().join("out");
    let args = ["--config", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(), "optimize"];
    let first = cli(&args);
    assert!(first.status.success(), "{}", text(&first.stderr));
    assert!(!text(&first.stdout).contains("(cached)"));
    let trace_path = out_dir.join("CL-10span-1pump_trace.tsv");
    let trace = NumericTable::read(&trace_path).unwrap();
    assert_eq!(trace.header, ["iteration", "best_fitness_tbps", "pump1_nm", "pump1_mw"]);
    assert_eq!(trace.rows.len(), 4);
    assert!(trace.rows.windows(2).all(|w| w[1][1] >= w[0][1]));
    assert!(trace.rows.iter().all(|r| (0.0..=250.0).contains(&r[3]) && (1350.0..=1460.0).contains(&r[2])));
    let first_trace = std::fs::read_to_string(&trace_path).unwrap();

    let second = cli(&args);
    assert!(text(&second.stdout).contains("(cached)"));
    assert_eq!(std::fs::read_to_string(&trace_path).unwrap(), first_trace);

    let mut reseeded = args.to_vec();
    reseeded.splice(4..4, ["--seed", "7"]);
    let third = cli(&reseeded);
    assert!(third.status.success());
    assert!(!text(&third.stdout).contains("(cached)"));
}

#[test]
fn dump_profile_has_a_row_per_node() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_text("cl.toml")
        .replace("pump_count = 0", "pumps = [[1430.0, 150.0]]")
        .replace("step_km = 0.1", "step_km = 1.0");
    let path = write_config(dir.path(), &cfg);
    let out_dir = dir.path().join("out");
    let out = cli(&["--config", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(), "dump-profile"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let t = NumericTable::read(&out_dir.join("CL-1pump_profile.tsv")).unwrap();
    assert_eq!(t.header.len(), 1 + 73 + 1);
    assert_eq!(t.rows.len(), 81);
    let pump = t.rows.iter().map(|r| r[74]).collect::<Vec<_>>();
    assert!((pump[80] - 10.0 * 150f64.log10()).abs() < 1e-4);
    assert!(pump.windows(2).all(|w| w[1] > w[0]));
}
