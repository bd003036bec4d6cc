use std::process::Command;

fn pfquad() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pfquad"))
}

#[test]
fn help_lists_the_flags() {
    let out = pfquad().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--scenario", "--config", "--out", "--max-depth", "--tolerance", "--theta-bulk", "--snapshot-every", "--seedless", "--quiet"] {
        assert!(text.contains(flag), "{flag} missing from --help");
    }
}

#[test]
fn bad_invocations_exit_with_code_two() {
    let out = pfquad().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));

    let out = pfquad().args(["--scenario", "bridge", "--quiet"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = pfquad().args(["--config", "/nonexistent/run.cfg", "--quiet"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "scenario = tension\n[material]\nlo = abc\n").unwrap();
    let out = pfquad().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn small_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.cfg");
    std::fs::write(&cfg, "scenario = tension\n[mesh]\ninitial_depth = 3\n[load]\nstage = 1e-3 x 3\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = pfquad()
        .arg("--config")
        .arg(&cfg)
        .args(["--max-depth", "5", "--snapshot-every", "1", "--seedless", "--quiet", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("load_disp.csv")).unwrap();
    assert!(csv.lines().count() >= 2);
    for name in ["snapshot_00000.vtk", "snapshot_00001.vtk", "snapshot_final.vtk", "summary.txt"] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert!(summary.contains("max_depth = 5"));
}

#[test]
fn divergence_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.cfg");
    std::fs::write(
        &cfg,
        "scenario = tension\n[mesh]\ninitial_depth = 3\nmax_depth = 4\n[load]\nstage = 1e-2 x 1\n[solver]\ntolerance = 1e-300\nnum_iter = 1\nmax_stagger_iter = 2\n",
    )
    .unwrap();
    let out = pfquad().arg("--config").arg(&cfg).arg("--quiet").arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
