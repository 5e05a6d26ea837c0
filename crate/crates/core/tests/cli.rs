use std::fs;
use std::path::Path;
use std::process::Command;

use polariton::cli::main_with;
use polariton::snapshot::{list_snapshots, read_snapshot_file};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["polariton"];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn short_cfg(dir: &Path) -> String {
    let path = dir.join("short.cfg");
    fs::write(
        &path,
        "[model cnrp2]\ng_ratio = 1.132\n[grid]\nndim = 1\nxsize = 41\ncavsizex = 20\n[pump]\nF_p = 0.5\n\
         [run]\nh = 0.001\nt_end = 0.2\nsnapshot_every = 50\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cfl_check_prints_published_ratio() {
    let (code, out, _) = run(&["cfl-check", "--preset", "table2"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.0232"), "{out}");
    assert!(out.contains("PASS"));
    let (code, out, _) = run(&["cfl-check", "--preset", "table1_2d", "--set", "h=0.1"]);
    assert_eq!(code, 1);
    assert!(out.contains("31.1671") && out.contains("FAIL"), "{out}");
}

#[test]
fn missing_config_exits_2() {
    let (code, _, err) = run(&["run", "--config", "missing.cfg"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.cfg"), "{err}");
}

#[test]
fn binary_reports_missing_config() {
    let status = Command::new(env!("CARGO_BIN_EXE_polariton"))
        .args(["run", "--config", "definitely-missing.cfg"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("definitely-missing.cfg"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["run"]).0, 2);
    assert_eq!(run(&["run", "--preset", "table2", "--config", "x.cfg"]).0, 2);
    let (code, _, err) = run(&["cfl-check", "--preset", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown preset"));
    let (code, _, err) = run(&["cfl-check", "--preset", "table2", "--set", "gamma_Q=1"]);
    assert_eq!(code, 1);
    assert!(err.contains("gamma_Q"));
}

#[test]
fn run_writes_snapshots_and_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = short_cfg(tmp.path());
    let out_dir = tmp.path().join("out");
    let (code, out, err) = run(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("wrote 5 snapshots"), "{out}");
    let snaps = list_snapshots(&out_dir).unwrap();
    assert_eq!(snaps.len(), 5);
    let last = read_snapshot_file(snaps.last().unwrap()).unwrap();
    assert!((last.t - 0.2).abs() < 1e-12);
    let diag = fs::read_to_string(out_dir.join("diagnostics.txt")).unwrap();
    assert!(diag.contains("peak_density:") && diag.contains("onset_time:"));
    assert!(out_dir.join("config.cfg").exists());

    // diag recomputes the same summary from the files
    let (code, text, _) = run(&["diag", "--in", out_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    for line in text.lines() {
        assert!(diag.contains(line), "{line}");
    }

    // export-csv
    let csv = tmp.path().join("psi.csv");
    let (code, _, _) = run(&[
        "export-csv",
        "--in",
        snaps[2].to_str().unwrap(),
        "--field",
        "psi",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("x,re,im\n-10.0,0.0,0.0\n"));
    assert_eq!(csv.lines().count(), 42);
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = short_cfg(tmp.path());
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(run(&["run", "--config", &cfg, "--out", a.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["run", "--config", &cfg, "--out", b.to_str().unwrap()]).0, 0);
    for name in ["snap_000004.epcs", "diagnostics.txt", "config.cfg"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn sweep_makes_one_directory_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = short_cfg(tmp.path());
    let root = tmp.path().join("sweep");
    let (code, out, err) = run(&[
        "sweep",
        "--config",
        &cfg,
        "--param",
        "g_ratio",
        "--values",
        "1.132,10,100",
        "--out",
        root.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    for v in ["1.132", "10", "100"] {
        let dir = root.join(format!("g_ratio={v}"));
        assert_eq!(list_snapshots(&dir).unwrap().len(), 5);
        assert!(dir.join("diagnostics.txt").exists());
    }
    let rows: Vec<f64> = out.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0] > rows[1] && rows[1] > rows[2], "{out}");
}

#[test]
fn policy_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let args = ["run", "--preset", "table1_1d", "--set", "h=0.2", "--set", "t_end=0.4", "--out"];
    let mut argv = args.to_vec();
    argv.push(out_dir.to_str().unwrap());
    let (code, _, err) = run(&argv);
    assert_eq!(code, 1);
    assert!(err.contains("CFL"), "{err}");
    argv.extend(["--policy", "warn"]);
    let (_, _, err) = run(&argv);
    assert!(err.contains("warning"), "{err}");
}
