use std::path::Path;
use std::process::{Command, Output};

use lambda_detector::params::{ghz, mhz, SystemParams};
use lambda_detector::protocols::{efficiency_map, ReadoutModel, SimSettings};
use lambda_detector::render::Table;
use lambda_detector::sweep::linspace;

fn lambdet(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambdet"))
        .env_remove("LAMBDET_CONFIG")
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn ok(o: &Output) {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

const SMALL_MAP: [&str; 4] =
    ["--set", "power_grid_dBm=-77, -74, 4", "--set", "freq_grid_GHz=10.26, 10.275, 4"];

#[test]
fn dressed_table_follows_grid_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = lambdet(dir.path(), &["-q", "dressed", "--set", "rabi_grid_MHz=0,60,50"]);
    ok(&o);
    let t = Table::read(&dir.path().join("dressed.csv")).unwrap();
    assert_eq!(t.rows.len(), 50);
    let rabi = t.column("rabi_MHz").unwrap();
    assert!(rabi.windows(2).all(|w| w[0] < w[1]));
    let (k41, k42) = (t.column("k41_MHz").unwrap(), t.column("k42_MHz").unwrap());
    let kappa = SystemParams::reference_device().kappa / mhz(1.0);
    for (a, b) in k41.iter().zip(&k42) {
        assert!((a + b - kappa).abs() < 1e-6 * kappa);
    }
}

#[test]
fn detect_map_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let o = lambdet(
        dir.path(),
        &["detect-map", "--set", "power_grid_dBm=-78.5, -73.5, 11", "--set", "freq_grid_GHz=10.24, 10.29, 11"],
    );
    ok(&o);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("[121/121] points"), "{stderr}");
    let t = Table::read(&dir.path().join("detect_map.csv")).unwrap();
    let eta = t.column("eta").unwrap();
    let k = (0..eta.len()).max_by(|&a, &b| eta[a].total_cmp(&eta[b])).unwrap();

    let p = SystemParams::reference_device();
    let powers = linspace(-78.5, -73.5, 11);
    let freqs = linspace(ghz(10.24), ghz(10.29), 11);
    let map = efficiency_map(
        &p,
        p.omega_ge - mhz(49.0),
        &powers,
        &freqs,
        85e-9,
        0.1,
        &ReadoutModel::default(),
        &SimSettings::default(),
    )
    .unwrap();
    let best = map.argmax().unwrap();
    assert_eq!((k / 11, k % 11), (best.row, best.col));
    assert!((eta[k] - best.grid_value).abs() < 1e-7);

    // the heatmap marker sits on a cell with high efficiency
    let svg = read(dir.path().join("detect_map.svg"));
    let marker = svg.lines().flat_map(|l| l.split('<')).find(|l| l.starts_with("circle class=\"marker\"")).unwrap();
    let z: f64 = marker.split("data-z=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
    assert!(z > 0.6, "{z}");
}

#[test]
fn output_independent_of_workers() {
    let run = |workers: &str| {
        let dir = tempfile::tempdir().unwrap();
        let mut args = vec!["-q", "--workers", workers, "detect-map"];
        args.extend(SMALL_MAP);
        ok(&lambdet(dir.path(), &args));
        read(dir.path().join("detect_map.csv"))
    };
    let one = run("1");
    assert_eq!(one, run("8"));
    assert_eq!(one, run("1"));
}

#[test]
fn strict_mode_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let flagged = lambdet(dir.path(), &["--strict", "detect", "--set", "fock_check=true", "--set", "n_max=1"]);
    assert_eq!(flagged.status.code(), Some(3));
    let lenient = lambdet(dir.path(), &["detect", "--set", "fock_check=true", "--set", "n_max=1"]);
    assert_eq!(lenient.status.code(), Some(0));
    let clean = lambdet(dir.path(), &["--strict", "detect", "--set", "fock_check=true"]);
    assert_eq!(clean.status.code(), Some(0), "{}", String::from_utf8_lossy(&clean.stderr));
}

#[test]
fn bad_configuration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "n_s = 0.1\nkappa_ext_ratio = 1.2\n").unwrap();
    let o = lambdet(dir.path(), &["--config", cfg.to_str().unwrap(), "detect"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("kappa_ext_ratio"), "{err}");
    let o = lambdet(dir.path(), &["detect", "--set", "P_d=-70"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lambdet(dir.path(), &["detect", "--set", "no_equals_sign"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("env.cfg");
    std::fs::write(&cfg, "chi_MHz = 31.25\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lambdet"))
        .env("LAMBDET_CONFIG", &cfg)
        .arg("show-config")
        .output()
        .unwrap();
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("chi_MHz = 31.25"));
}

#[test]
fn render_errors_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    std::fs::write(&csv, "a,b,c\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n").unwrap();
    let csv_s = csv.to_str().unwrap();
    let o = lambdet(dir.path(), &["render", csv_s, "--x", "a", "--y", "b", "--z", "c", "--mark", "max"]);
    ok(&o);
    let svg = read(dir.path().join("t.svg"));
    assert_eq!(svg.matches("class=\"cell\"").count(), 4);
    assert!(svg.contains("data-z=\"4\""));
    let o = lambdet(dir.path(), &["render", csv_s, "--x", "a", "--y", "b", "--z", "missing"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lambdet(dir.path(), &["render", "/nonexistent.csv", "--x", "a", "--y", "b", "--z", "c"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_runs_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    ok(&lambdet(dir.path(), &["-q", "--trace-out", trace.to_str().unwrap(), "detect"]));
    let t = Table::read(&dir.path().join("detect.csv")).unwrap();
    let eta = t.column("eta").unwrap()[0];
    assert!(eta > 0.5 && eta < 1.0);
    assert!(read(&trace).lines().count() > 10);
    ok(&lambdet(dir.path(), &["-q", "cycle"]));
    let c = Table::read(&dir.path().join("cycle.csv")).unwrap();
    assert!((c.column("period_ns").unwrap()[0] - 757.5).abs() < 1e-6);
}
