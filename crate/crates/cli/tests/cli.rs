use std::fs;
use std::path::Path;
use std::process::Command;

use ergeom_cli::app::{main_with_args, rerun, MANIFEST_NAME};
use ergeom_cli::output::RunManifest;
use tempfile::tempdir;

fn run(args: &[&str], out: &Path) -> i32 {
    let mut full = vec!["ergeom"];
    full.extend_from_slice(args);
    full.push("--out");
    full.push(out.to_str().unwrap());
    main_with_args(full)
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn manifest(out: &Path) -> RunManifest {
    RunManifest::read(&out.join(MANIFEST_NAME)).unwrap()
}

#[test]
fn complete_graph_spectrum() {
    let dir = tempdir().unwrap();
    assert_eq!(run(&["spectrum", "--family", "gnp", "--n", "4", "--p", "1", "--seed", "5"], dir.path()), 0);
    let mut vals: Vec<f64> = csv_rows(&dir.path().join("eigenvalues.csv"))
        .iter()
        .map(|r| r[2].parse().unwrap())
        .collect();
    vals.sort_by(f64::total_cmp);
    let want = [0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0];
    for (v, w) in vals.iter().zip(want) {
        assert!((v - w).abs() < 1e-12, "{vals:?}");
    }
    let m = manifest(dir.path());
    assert_eq!(m.subcommand, "spectrum");
    assert_eq!(m.config["seed"], "5");
    for (name, sha) in &m.outputs {
        let bytes = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(&ergeom_cli::output::sha256_hex(&bytes), sha);
    }
}

#[test]
fn truncated_tree_spectrum_has_atom_at_one() {
    let dir = tempdir().unwrap();
    let args = ["spectrum", "--family", "truncated_tree", "--d", "3", "--depth", "6", "--seed", "0"];
    assert_eq!(run(&args, dir.path()), 0);
    let m = manifest(dir.path());
    assert!(m.results["atom_mass_at_1"].as_f64().unwrap() > 0.2);
    assert_eq!(m.results["mckay_d"], 3);
    assert!(dir.path().join("mckay.csv").exists());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempdir().unwrap();
    // missing seed
    assert_eq!(run(&["spectrum", "--n", "10", "--d", "2"], dir.path()), 2);
    // unknown key in a config file
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "seed = 1\nbogus_key = 3\n").unwrap();
    assert_eq!(run(&["gap-scan", "--config", cfg.to_str().unwrap()], dir.path()), 2);
    // malformed line
    fs::write(&cfg, "seed 1\n").unwrap();
    assert_eq!(run(&["theory", "--config", cfg.to_str().unwrap()], dir.path()), 2);
    // bad value
    assert_eq!(run(&["gap-scan", "--n-list", "10,x", "--seed", "1"], dir.path()), 2);
    assert_eq!(run(&["gap-scan", "--n-list", "20,10", "--seed", "1"], dir.path()), 2);
    assert_eq!(run(&["spectrum", "--family", "nope", "--seed", "1"], dir.path()), 2);
    // clap usage error
    assert_eq!(run(&["spectrum", "--not-a-flag", "1"], dir.path()), 2);
}

#[test]
fn computation_errors_exit_one() {
    let dir = tempdir().unwrap();
    let args = ["cheeger", "--family", "gnp", "--n", "30", "--p", "0.5", "--seed", "1", "--method", "exact", "--realizations", "1"];
    assert_eq!(run(&args, dir.path()), 1);
}

#[test]
fn flags_override_config_file() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# gap scan on paths\nfamily = path\nn_list = 10,20\nseed = 9\n").unwrap();
    assert_eq!(run(&["gap-scan", "--config", cfg.to_str().unwrap(), "--n-list", "30"], dir.path()), 0);
    let m = manifest(dir.path());
    assert_eq!(m.config["n_list"], "30");
    assert_eq!(m.config["family"], "path");
    assert_eq!(m.results["verdict"], "none");
    let text = fs::read_to_string(dir.path().join("gap.csv")).unwrap();
    assert!(text.starts_with("n,realizations,median,q1,q3\n"));
    assert!(text.ends_with("# verdict=none\n"));
}

#[test]
fn path_gap_scales_inverse_square() {
    let dir = tempdir().unwrap();
    assert_eq!(run(&["gap-scan", "--family", "path", "--n-list", "100,200", "--seed", "1"], dir.path()), 0);
    let rows = csv_rows(&dir.path().join("gap.csv"));
    let a: f64 = rows[0][2].parse().unwrap();
    let b: f64 = rows[1][2].parse().unwrap();
    assert!((a / b - 4.0).abs() < 0.8, "ratio {}", a / b);
}

#[test]
fn theory_records_subcritical_rows_and_continues() {
    let dir = tempdir().unwrap();
    let args = ["theory", "--d-list", "1.0,2", "--delta-list", "3,6", "--n-list", "1000"];
    assert_eq!(run(&args, dir.path()), 0);
    let text = fs::read_to_string(dir.path().join("theory.csv")).unwrap();
    assert!(text.starts_with(
        "d,Delta,n,q_log10,rho,rho_lower,rho_upper,rho_limit,p4_lower,threshold_ok\n"
    ));
    assert_eq!(csv_rows(&dir.path().join("theory.csv")).len(), 2);
    assert_eq!(text.matches("not supercritical").count(), 2);
    assert_eq!(manifest(dir.path()).results["row_errors"], 2);
}

#[test]
fn theory_monte_carlo_row() {
    let dir = tempdir().unwrap();
    let args = ["theory", "--d-list", "2", "--delta-list", "3", "--n-list", "1000", "--mc", "true", "--mc-samples", "200000", "--seed", "4"];
    assert_eq!(run(&args, dir.path()), 0);
    let rows = csv_rows(&dir.path().join("theory_mc.csv"));
    assert_eq!(rows.len(), 1);
    let z: f64 = rows[0][8].parse().unwrap();
    assert!(z.abs() < 5.0, "z = {z}");
}

#[test]
fn cheeger_fixtures_hold() {
    let dir = tempdir().unwrap();
    assert_eq!(run(&["cheeger"], dir.path()), 0);
    let text = fs::read_to_string(dir.path().join("cheeger.csv")).unwrap();
    assert!(text.ends_with("# sandwich_holds=true\n"));
    assert_eq!(csv_rows(&dir.path().join("cheeger.csv")).len(), 4);
}

#[test]
fn tree_curvature_profile_is_zero() {
    let dir = tempdir().unwrap();
    let args = ["curvature", "--family", "truncated_tree", "--d", "3", "--depth", "4", "--realizations", "1", "--triangles", "2000", "--seed", "2"];
    assert_eq!(run(&args, dir.path()), 0);
    let rows = csv_rows(&dir.path().join("curvature.csv"));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[5] == "0"), "{rows:?}");
    assert!(!dir.path().join("collapse.csv").exists());
}

#[test]
fn generate_writes_edge_list() {
    let dir = tempdir().unwrap();
    assert_eq!(run(&["generate", "--family", "cycle", "--n", "5", "--seed", "0"], dir.path()), 0);
    let text = fs::read_to_string(dir.path().join("graph.edges")).unwrap();
    let g = ergeom::graph::read_edge_list(text.as_bytes()).unwrap();
    assert_eq!((g.n(), g.edge_count()), (5, 5));
}

#[test]
fn rerun_reproduces_bytes_across_worker_counts() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("first");
    let args = ["curvature", "--n-list", "60,120", "--d", "2.5", "--realizations", "3", "--triangles", "3000", "--seed", "11", "--workers", "1"];
    assert_eq!(run(&args, &first), 0);
    let again = dir.path().join("again");
    let m = rerun(&first.join(MANIFEST_NAME), Some(&again), Some(3)).unwrap();
    assert_eq!(m.workers, 3);
    for name in manifest(&first).outputs.keys() {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(again.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn worker_env_applies_only_without_flag() {
    let dir = tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_ergeom");
    let status = Command::new(bin)
        .args(["theory", "--n-list", "100", "--out"])
        .arg(dir.path())
        .env("ERGEOM_WORKERS", "3")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(manifest(dir.path()).workers, 3);
    let status = Command::new(bin)
        .args(["theory", "--n-list", "100", "--workers", "2", "--out"])
        .arg(dir.path())
        .env("ERGEOM_WORKERS", "3")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(manifest(dir.path()).workers, 2);
}
