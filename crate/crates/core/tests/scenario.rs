use std::collections::HashMap;

use approx::assert_relative_eq;
use pfquad::error::ConfigError;
use pfquad::scenario::{builtin_scenarios, parse_config, parse_config_str, write_snapshot, Benchmark, LengthScale, OutputWriter};
use pfquad::solver::{LoadStage, Simulation};
use pfquad::RunConfig;

/// Just enough of the legacy VTK format to check what the writer emits.
struct Vtk {
    points: Vec<[f64; 3]>,
    cells: Vec<Vec<usize>>,
    cell_types: Vec<u32>,
    point_data: HashMap<String, Vec<f64>>,
    cell_data: HashMap<String, Vec<f64>>,
}

fn read_vtk(text: &str) -> Vtk {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# vtk DataFile"));
    lines.next().unwrap();
    assert_eq!(lines.next().unwrap().trim(), "ASCII");
    assert_eq!(lines.next().unwrap().trim(), "DATASET UNSTRUCTURED_GRID");
    let mut tokens = lines.flat_map(|l| l.split_whitespace());
    let mut v = Vtk {
        points: Vec::new(),
        cells: Vec::new(),
        cell_types: Vec::new(),
        point_data: HashMap::new(),
        cell_data: HashMap::new(),
    };
    let mut target = "";
    let mut count = 0;
    while let Some(word) = tokens.next() {
        let mut next = || tokens.next().expect("truncated file").to_string();
        match word {
            "POINTS" => {
                let n: usize = next().parse().unwrap();
                next();
                for _ in 0..n {
                    v.points.push([next().parse().unwrap(), next().parse().unwrap(), next().parse().unwrap()]);
                }
            }
            "CELLS" => {
                let n: usize = next().parse().unwrap();
                let total: usize = next().parse().unwrap();
                let mut used = 0;
                for _ in 0..n {
                    let k: usize = next().parse().unwrap();
                    v.cells.push((0..k).map(|_| next().parse().unwrap()).collect());
                    used += k + 1;
                }
                assert_eq!(used, total);
            }
            "CELL_TYPES" => {
                let n: usize = next().parse().unwrap();
                for _ in 0..n {
                    v.cell_types.push(next().parse().unwrap());
                }
            }
            "POINT_DATA" | "CELL_DATA" => {
                target = if word == "POINT_DATA" { "point" } else { "cell" };
                count = next().parse().unwrap();
            }
            "SCALARS" | "VECTORS" => {
                let name = next();
                next();
                let width = if word == "VECTORS" { 3 } else { 1 };
                if word == "SCALARS" {
                    assert_eq!(next(), "1");
                    assert_eq!(next(), "LOOKUP_TABLE");
                    next();
                }
                let vals: Vec<f64> = (0..count * width).map(|_| next().parse().unwrap()).collect();
                let map = if target == "point" { &mut v.point_data } else { &mut v.cell_data };
                map.insert(name, vals);
            }
            other => panic!("unexpected token {other}"),
        }
    }
    v
}

#[test]
fn empty_file_gives_builtin_defaults() {
    for bench in ["tension", "shear", "lshape"] {
        let cfg: RunConfig = parse_config_str("", Some(bench)).unwrap();
        assert_eq!(cfg, RunConfig::builtin(Benchmark::from_name(bench).unwrap()));
    }
    assert_eq!(builtin_scenarios::<f64>().len(), 3);
    for cfg in builtin_scenarios::<f64>() {
        cfg.validate().unwrap();
        assert!(cfg.scenario.initial_mesh().is_ok());
    }
}

#[test]
fn overrides_are_applied() {
    let text = "scenario = shear\n[solver]\ntolerance = 1e-5   # tighter\n[mesh]\nmax_depth = 6\n[material]\nlo = 3h\n[load]\nstage = 1e-4 x 3\nstage = 5e-5 x 2\nstop_below = none\n";
    let cfg: RunConfig = parse_config_str(text, None).unwrap();
    assert_eq!(cfg.scenario.benchmark, Benchmark::Shear);
    assert_eq!(cfg.solver.tolerance, 1e-5);
    assert_eq!(cfg.scenario.max_depth, 6);
    assert_eq!(cfg.scenario.length_scale, LengthScale::ElementMultiple(3.0));
    assert_relative_eq!(cfg.scenario.resolved_length_scale(), 3.0 / 64.0);
    assert_eq!(cfg.solver.load_path().len(), 5);
    assert_relative_eq!(*cfg.solver.load_path().last().unwrap(), 4e-4);
    assert_eq!(cfg.solver.stop_below, None);
    assert_eq!(
        cfg.solver.schedule[1],
        LoadStage {
            increment: 5e-5,
            steps: 2
        }
    );
}

#[test]
fn errors_carry_line_numbers() {
    let err = parse_config_str::<f64>("\n[material]\nlo = abc\n", Some("tension")).unwrap_err();
    assert!(matches!(err, ConfigError::Value { line: 3, .. }), "{err:?}");
    assert!(err.to_string().contains("line 3"));
    let err = parse_config_str::<f64>("[solver]\nspeed = 3\n", Some("tension")).unwrap_err();
    assert!(matches!(err, ConfigError::UnknownKey { line: 2, .. }));
    let err = parse_config_str::<f64>("[bogus]\n", Some("tension")).unwrap_err();
    assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
    let err = parse_config_str::<f64>("tolerance\n", Some("tension")).unwrap_err();
    assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
    assert!(matches!(parse_config_str::<f64>("", Some("bridge")), Err(ConfigError::UnknownScenario(_))));
    assert!(matches!(parse_config_str::<f64>("", None), Err(ConfigError::Invalid(_))));
    assert!(parse_config_str::<f64>("[mesh]\ninitial_depth = 9\nmax_depth = 4\n", Some("shear")).is_err());
}

#[test]
fn missing_file_is_a_read_error() {
    let err = parse_config::<f64>(std::path::Path::new("/nonexistent/run.cfg"), Some("tension")).unwrap_err();
    assert!(matches!(err, ConfigError::Read { .. }));
}

#[test]
fn engineering_constants_in_config() {
    let cfg: RunConfig = parse_config_str("[material]\nyoung = 25.85\npoisson = 0.18\n", Some("lshape")).unwrap();
    let p = cfg.scenario.material();
    assert_relative_eq!(p.young(), 25.85, max_relative = 1e-12);
    assert_relative_eq!(p.poisson(), 0.18, max_relative = 1e-12);
    assert_relative_eq!(p.gc, 9.5e-5);
    assert_eq!(cfg.scenario.thickness, 100.0);
}

#[test]
fn effective_config_parses_back() {
    for cfg in builtin_scenarios::<f64>() {
        let text = cfg.to_config_string();
        let again: RunConfig = parse_config_str(&text, None).unwrap();
        assert_eq!(again, cfg);
    }
}

#[test]
fn outputs_match_the_run() {
    let mut cfg: RunConfig = parse_config_str(
        "[mesh]\ninitial_depth = 3\nmax_depth = 5\n[load]\nstage = 5e-4 x 4\n[output]\nsnapshot_every = 2\ncheckpoint_every = 2\n",
        Some("tension"),
    )
    .unwrap();
    cfg.solver.stop_below = None;
    let dir = tempfile::tempdir().unwrap();
    let sc = &cfg.scenario;
    let mut sim = Simulation::new(sc.problem(), cfg.solver.clone(), cfg.adapt, sc.initial_mesh().unwrap()).unwrap();
    let mut out = OutputWriter::create(dir.path(), &cfg).unwrap();
    sim.converge_initial_mesh().unwrap();
    out.start(&sim).unwrap();
    let records = sim.run(|s, r| out.observe(s, r)).unwrap();
    let summary = out.finish(Some(&sim), "completed").unwrap();
    assert_eq!(summary.rows.len(), 4);

    let csv = std::fs::read_to_string(dir.path().join("load_disp.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "step,displacement,reaction,elements,dofs");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        assert_eq!(row[0] as usize, rec.step);
        assert_eq!(row[1], rec.displacement);
        assert_eq!(row[2], rec.reaction);
        assert_eq!(row[3] as usize, rec.elements);
        assert_eq!(row[4] as usize, rec.dofs);
    }

    for name in ["snapshot_00000.vtk", "snapshot_00002.vtk", "snapshot_00004.vtk", "snapshot_final.vtk", "checkpoint.json", "summary.txt"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    assert!(!dir.path().join("snapshot_00001.vtk").exists());
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains(&format!("final elements: {}", sim.elements().len())));
    assert!(summary.contains("outcome: completed"));

    let text = std::fs::read_to_string(dir.path().join("snapshot_final.vtk")).unwrap();
    let vtk = read_vtk(&text);
    assert_eq!(vtk.points.len(), sim.mesh().num_nodes());
    assert_eq!(vtk.cells.len(), sim.elements().len());
    assert!(vtk.cell_types.iter().all(|&t| t == 7));
    for (cell, e) in vtk.cells.iter().zip(sim.elements()) {
        assert_eq!(cell, &e.nodes);
    }
    assert_eq!(vtk.point_data["phi"].len(), sim.mesh().num_nodes());
    assert_eq!(vtk.point_data["u"].len(), 3 * sim.mesh().num_nodes());
    assert_eq!(vtk.cell_data["von_mises"].len(), sim.elements().len());
    assert!(vtk.cell_data["von_mises"].iter().all(|&s| s >= 0.0));
    for (a, b) in vtk.point_data["phi"].iter().zip(&sim.fields().phi) {
        assert_relative_eq!(*a, *b, max_relative = 1e-12, epsilon = 1e-300);
    }

    let mut buf = Vec::new();
    write_snapshot(&mut buf, &sim, "again").unwrap();
    assert_eq!(read_vtk(std::str::from_utf8(&buf).unwrap()).points.len(), vtk.points.len());
}
