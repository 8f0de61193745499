//! End-to-end checks of the `gpmap` binary: flag handling, file outputs,
//! error paths and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gpmap::census::files::{load_census, CensusPaths};
use gpmap::census::CensusConfigEcho;
use gpmap::manifest::RunManifest;

fn gpmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpmap"))
        .args(args)
        .env_remove("GPMAP_THREADS")
        .output()
        .expect("binary runs")
}

fn gpmap_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_gpmap"));
    command.args(args).env_remove("GPMAP_THREADS");
    for (key, value) in env {
        command.env(key, value);
    }
    command.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn build_census(dir: &Path, length: u32) -> std::path::PathBuf {
    let prefix = dir.join(format!("c{length}"));
    let output = gpmap(&[
        "census",
        "-L",
        &length.to_string(),
        "--shards",
        "16",
        "--threads",
        "2",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "census failed: {}", stderr(&output));
    prefix
}

#[test]
fn census_prints_the_summary_counts() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 5);
    let text = stdout(&gpmap(&["info", prefix.to_str().unwrap()]));
    assert!(text.contains("viable_count: 1510"), "{text}");
    assert!(text.contains("L: 5"));
    assert!(text.contains("D: 8"));
    assert!(text.contains("total: 32768"));
    assert!(text.contains("information: 1.47988905526e0 mers"), "{text}");
    assert!(text.contains("rotation_classes:"));
    assert!(text.contains("clusters_raw:"));
    assert!(text.contains("clusters_collapsed_rotations:"));
}

#[test]
fn census_refuses_existing_outputs_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 3);
    let again = gpmap(&[
        "census", "-L", "3", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(!again.status.success());
    assert!(stderr(&again).contains("--force"), "{}", stderr(&again));

    let forced = gpmap(&[
        "census", "-L", "3", "--force", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(forced.status.success());
}

#[test]
fn census_envelope_error_explains_the_rank_limit() {
    let output = gpmap(&["census", "-L", "22", "--out", "/tmp/never-written"]);
    assert!(!output.status.success());
    let text = stderr(&output);
    assert!(text.contains("63"), "{text}");
}

#[test]
fn info_works_on_a_metadata_only_census() {
    let dir = tempfile::tempdir().unwrap();
    // A synthetic meta at the letter scale: payloads never existed.
    let meta = serde_json::json!({
        "format_version": 1,
        "isa_id": "default-v1",
        "L": 8,
        "D": 26,
        "T": 320,
        "M": 4,
        "G": 16,
        "B": 64,
        "total": "208827064576",
        "viable_count": 914,
        "self_replicator_count": 914,
        "shard_count": 1,
        "created_utc": "2026-01-01T00:00:00Z",
        "payload_sha256": {}
    });
    let path = dir.path().join("letters8.meta.json");
    fs::write(&path, serde_json::to_string_pretty(&meta).unwrap()).unwrap();

    let output = gpmap(&["info", path.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("information: 5.9074"), "{text}");
    assert!(text.contains("payloads: absent"), "{text}");

    // The L=9 counterpart.
    let meta9 = serde_json::json!({
        "format_version": 1,
        "isa_id": "default-v1",
        "L": 9,
        "D": 26,
        "T": 388,
        "M": 4,
        "G": 16,
        "B": 64,
        "total": "5429503678976",
        "viable_count": 36171,
        "self_replicator_count": 30547,
        "shard_count": 1,
        "created_utc": "2026-01-01T00:00:00Z",
        "payload_sha256": {}
    });
    let path9 = dir.path().join("letters9.meta.json");
    fs::write(&path9, serde_json::to_string_pretty(&meta9).unwrap()).unwrap();
    let text = stdout(&gpmap(&["info", path9.to_str().unwrap(), "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mers = doc["information_mers"].as_f64().unwrap();
    assert!((mers - 5.7785).abs() < 5e-4, "{mers}");
}

#[test]
fn info_rejects_corrupted_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let paths = CensusPaths::new(&prefix);
    let mut bytes = fs::read(&paths.viable).unwrap();
    bytes[3] ^= 0x40;
    fs::write(&paths.viable, &bytes).unwrap();

    let output = gpmap(&["info", prefix.to_str().unwrap()]);
    assert!(!output.status.success());
    assert!(stderr(&output).contains("checksum mismatch"), "{}", stderr(&output));
}

#[test]
fn clusters_summary_and_component_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let prefix = prefix.to_str().unwrap();

    let summary = stdout(&gpmap(&["clusters", prefix, "--mode", "raw"]));
    let doc: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(doc["mode"], "raw");
    let components = doc["components"].as_array().unwrap();
    assert!(!components.is_empty());
    let id = components[0]["id"].as_u64().unwrap();

    let collapsed = stdout(&gpmap(&["clusters", prefix, "--mode", "collapsed-rotations"]));
    let collapsed: serde_json::Value = serde_json::from_str(&collapsed).unwrap();
    assert!(
        collapsed["components"].as_array().unwrap().len() <= components.len(),
        "collapsing rotations must not split clusters"
    );

    let dot = stdout(&gpmap(&[
        "clusters", prefix, "--component", &id.to_string(), "--format", "dot",
    ]));
    assert!(dot.starts_with(&format!("graph component_{id} {{")));

    let graph = stdout(&gpmap(&[
        "clusters", prefix, "--component", &id.to_string(),
    ]));
    let graph: serde_json::Value = serde_json::from_str(&graph).unwrap();
    let nodes = graph["nodes"].as_array().unwrap();
    let edges = graph["edges"].as_array().unwrap();
    assert_eq!(nodes.len() as u64, components[0]["size"].as_u64().unwrap());
    assert_eq!(edges.len() as u64, components[0]["edge_count"].as_u64().unwrap());

    let missing = gpmap(&["clusters", prefix, "--component", "99999999"]);
    assert!(!missing.status.success());
    assert!(stderr(&missing).contains("unknown cluster component"), "{}", stderr(&missing));
}

#[test]
fn robustness_rejects_a_non_viable_rank_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let output = gpmap(&["robustness", prefix.to_str().unwrap(), "--rank", "0"]);
    assert!(!output.status.success());
    assert!(
        stderr(&output).contains("rank 0 is not in the viable set"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn robustness_extremes_resolve_ties_to_the_smallest_rank() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let text = stdout(&gpmap(&[
        "robustness", prefix.to_str().unwrap(), "--most-robust", "--most-fragile",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,letters,robustness");
    assert_eq!(lines.len(), 3);

    // Recompute the extremes the slow way and check the tie-break.
    let loaded = load_census(&prefix).unwrap();
    let mut best: Option<(u64, u32)> = None;
    let mut worst: Option<(u64, u32)> = None;
    for &rank in &loaded.census.viable_ranks {
        let nu = gpmap::analysis::hamming::robustness(&loaded.census, rank).unwrap();
        if best.is_none_or(|(_, b)| nu > b) {
            best = Some((rank, nu));
        }
        if worst.is_none_or(|(_, w)| nu < w) {
            worst = Some((rank, nu));
        }
    }
    assert!(lines[1].starts_with(&format!("{},", best.unwrap().0)));
    assert!(lines[2].starts_with(&format!("{},", worst.unwrap().0)));
}

#[test]
fn mean_curve_of_an_empty_census_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 1);
    let output = gpmap(&["curves", prefix.to_str().unwrap(), "--mean"]);
    assert!(!output.status.success());
    assert!(stderr(&output).contains("empty viable set"), "{}", stderr(&output));
}

#[test]
fn curves_rows_satisfy_the_endpoint_laws() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let loaded = load_census(&prefix).unwrap();
    let rank = loaded.census.viable_ranks[0];

    let text = stdout(&gpmap(&[
        "curves",
        prefix.to_str().unwrap(),
        "--rank",
        &rank.to_string(),
        "--mean",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,n,cum_viable,cum_total,rho,phi");
    // n = 0 row: rho = 1, phi = 0.
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], rank.to_string());
    assert_eq!(first[1], "0");
    assert_eq!(first[2], "1");
    assert_eq!(first[3], "1");
    assert_eq!(first[5], "0.00000000000e0");
    // Mean rows follow, sharing the endpoints.
    let mean_first: Vec<&str> = lines[6].split(',').collect();
    assert_eq!(mean_first[0], "mean");
    assert_eq!(mean_first[5], "0.00000000000e0");
    let mean_last: Vec<&str> = lines.last().unwrap().split(',').collect();
    let info = 4.0 - (loaded.census.viable_count() as f64).ln() / 8f64.ln();
    let phi_end: f64 = mean_last[5].parse().unwrap();
    assert!((phi_end + info).abs() < 1e-9);

    let bad = gpmap(&["curves", prefix.to_str().unwrap(), "--rank", "1"]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("rank 1"), "{}", stderr(&bad));
}

#[test]
fn baselines_match_the_closed_forms() {
    let output = gpmap(&[
        "baselines", "--length", "9", "--alphabet", "26", "--info", "5.778",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,phi_min,phi_ne");
    assert_eq!(lines.len(), 11);

    let row1: Vec<&str> = lines[1].split(',').collect();
    let phi_min_0: f64 = row1[1].parse().unwrap();
    assert_eq!(phi_min_0, 0.0);

    // Printed at 12 significant digits, so compare at that granularity.
    let row_n1: Vec<&str> = lines[2].split(',').collect();
    let phi_min_1: f64 = row_n1[1].parse().unwrap();
    assert!((phi_min_1 - (-(226f64.ln() / 26f64.ln()))).abs() < 1e-10, "{phi_min_1}");

    let last: Vec<&str> = lines[10].split(',').collect();
    let phi_ne_9: f64 = last[2].parse().unwrap();
    assert!((phi_ne_9 + 5.778).abs() < 1e-10, "{phi_ne_9}");

    let missing = gpmap(&["baselines", "--length", "9", "--alphabet", "26"]);
    assert!(!missing.status.success());
    assert!(stderr(&missing).contains("--info"), "{}", stderr(&missing));
}

#[test]
fn baselines_derive_from_a_census() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let text = stdout(&gpmap(&["baselines", "--census", prefix.to_str().unwrap()]));
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0], "4");
    let phi_ne_4: f64 = fields[2].parse().unwrap();
    let info = 4.0 - 118f64.ln() / 8f64.ln();
    assert!((phi_ne_4 + info).abs() < 1e-9);
}

#[test]
fn trace_reports_bad_letters_with_their_position() {
    let output = gpmap(&["trace", "cdxeaa"]);
    assert!(!output.status.success());
    let text = stderr(&output);
    assert!(text.contains("'x'") && text.contains("position 2"), "{text}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sweep.toml");
    let out_from_config = dir.path().join("from-config");
    fs::write(
        &config_path,
        format!(
            "length = 3\nshards = 8\nthreads = 2\nout = {:?}\n",
            out_from_config.to_str().unwrap()
        ),
    )
    .unwrap();

    // Everything from the config file.
    let output = gpmap(&["census", "--config", config_path.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("L 3"), "{text}");
    assert!(text.contains("shards 8"), "{text}");
    assert!(CensusPaths::new(&out_from_config).meta.exists());

    // Explicit flags beat the file.
    let out_flag = dir.path().join("from-flag");
    let output = gpmap(&[
        "census",
        "--config",
        config_path.to_str().unwrap(),
        "-L",
        "4",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("L 4"));

    // Unknown keys are caught.
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "lenght = 3\n").unwrap();
    let output = gpmap(&["census", "--config", bad.to_str().unwrap()]);
    assert!(!output.status.success());
}

#[test]
fn threads_default_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("envthreads");
    let output = gpmap_env(
        &["census", "-L", "3", "--out", prefix.to_str().unwrap()],
        &[("GPMAP_THREADS", "2")],
    );
    assert!(output.status.success());
    assert!(stdout(&output).contains("threads 2"), "{}", stdout(&output));

    let output = gpmap_env(
        &["census", "-L", "3", "--force", "--out", prefix.to_str().unwrap()],
        &[("GPMAP_THREADS", "not-a-number")],
    );
    assert!(!output.status.success());
}

#[test]
fn verify_passes_on_disk_censuses() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let output = gpmap(&["verify", "--census", prefix.to_str().unwrap()]);
    assert!(output.status.success(), "{}", stdout(&output));
    let text = stdout(&output);
    assert!(text.contains("checksums verified on load"));
    assert!(text.contains("all 12 checks passed"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_runs_in_memory_without_a_census() {
    let output = gpmap(&["verify", "-L", "3", "--threads", "2"]);
    assert!(output.status.success(), "{}", stdout(&output));
    assert!(stdout(&output).contains("all 12 checks passed"));
}

#[test]
fn emitters_write_files_with_sidecar_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 4);
    let csv_path = dir.path().join("curves.csv");
    let output = gpmap(&[
        "curves",
        prefix.to_str().unwrap(),
        "--all",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(csv_path.exists());
    let manifest = RunManifest::load(&dir.path().join("curves.csv.manifest.json")).unwrap();
    assert_eq!(manifest.subcommand, "curves");
    let sha = &manifest.payload_sha256["curves.csv"];
    assert_eq!(
        *sha,
        gpmap::manifest::sha256_hex(&fs::read(&csv_path).unwrap())
    );

    // Refuse to clobber, obey --force.
    let output = gpmap(&[
        "curves", prefix.to_str().unwrap(), "--all", "--out", csv_path.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
}

#[test]
fn census_manifest_reproduces_byte_identical_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = build_census(dir.path(), 5);
    let paths = CensusPaths::new(&prefix);
    let manifest = RunManifest::load(&paths.manifest).unwrap();
    let echo: CensusConfigEcho = serde_json::from_value(manifest.config.clone()).unwrap();
    let config = echo.to_config().unwrap();

    let replay_prefix = dir.path().join("replay");
    let opts = gpmap::census::RunOptions {
        threads: 3,
        bitmap: if echo.bitmap {
            gpmap::census::BitmapChoice::Always
        } else {
            gpmap::census::BitmapChoice::Never
        },
        force: false,
    };
    gpmap::census::run_census_to_files(&config, &replay_prefix, &opts).unwrap();
    let replay_paths = CensusPaths::new(&replay_prefix);
    assert_eq!(
        fs::read(&paths.viable).unwrap(),
        fs::read(&replay_paths.viable).unwrap()
    );
    assert_eq!(
        fs::read(&paths.bitmap).unwrap(),
        fs::read(&replay_paths.bitmap).unwrap()
    );
}
