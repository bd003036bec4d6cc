use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use log::{error, info};

use pfquad::error::{ConfigError, SimulationError};
use pfquad::scenario::{parse_config, parse_config_str, OutputWriter, RunConfig};
use pfquad::solver::Simulation;

/// Adaptive phase-field fracture on quadtree meshes.
#[derive(Debug, Parser)]
#[command(name = "pfquad", version)]
struct Args {
    /// Built-in benchmark: tension, shear or lshape.
    #[arg(long)]
    scenario: Option<String>,
    /// Configuration file applied on top of the scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Finest quadtree level.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Staggered-loop convergence tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Bulk marking fraction.
    #[arg(long)]
    theta_bulk: Option<f64>,
    /// Write a VTK snapshot every N steps (0 disables).
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Fail if the run would use any randomness.
    #[arg(long)]
    seedless: bool,
    /// Only print errors.
    #[arg(long)]
    quiet: bool,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

fn load(args: &Args) -> Result<RunConfig<f64>, ConfigError> {
    let mut cfg = match (&args.config, &args.scenario) {
        (Some(path), name) => parse_config(path, name.as_deref())?,
        (None, Some(name)) => parse_config_str("", Some(name))?,
        (None, None) => return Err(ConfigError::Invalid("either --scenario or --config is required".into())),
    };
    if let Some(d) = args.max_depth {
        cfg.scenario.max_depth = d;
        cfg.scenario.initial_depth = cfg.scenario.initial_depth.min(d);
    }
    if let Some(t) = args.tolerance {
        cfg.solver.tolerance = t;
    }
    if let Some(t) = args.theta_bulk {
        cfg.adapt.theta_bulk = t;
    }
    if let Some(n) = args.snapshot_every {
        cfg.output.snapshot_every = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &RunConfig<f64>, args: &Args) -> Result<(), SimulationError> {
    let scenario = &cfg.scenario;
    let mut sim = Simulation::new(
        scenario.problem(),
        cfg.solver.clone(),
        cfg.adapt,
        scenario.initial_mesh()?,
    )?;
    let mut out = OutputWriter::create(&args.out, cfg)?;
    let passes = sim.converge_initial_mesh()?;
    info!(
        "{}: initial mesh after {} passes: {} elements, {} dofs, lo = {:e} mm",
        scenario.benchmark.name(),
        passes,
        sim.elements().len(),
        3 * sim.mesh().num_nodes(),
        scenario.resolved_length_scale()
    );
    out.start(&sim)?;
    let result = sim.run(|s, rec| {
        info!(
            "step {:5} u = {:.4e} R = {:.5e} elements {} iterations {} phi_max {:.3}",
            rec.step,
            rec.displacement,
            rec.reaction,
            rec.elements,
            rec.iterations,
            rec.peak_phi
        );
        out.observe(s, rec)
    });
    let outcome = match &result {
        Ok(_) => "completed".to_string(),
        Err(e) => format!("failed: {e}"),
    };
    out.finish(Some(&sim), &outcome)?;
    result.map(|_| ())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = if args.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            error!("{e}");
            eprintln!("usage: pfquad --scenario {{tension|shear|lshape}} [--config PATH] [--out DIR] (see --help)");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if args.seedless {
        // the solver has no random inputs; nothing else to enforce
        info!("seedless: run is fully deterministic");
    }
    match run(&cfg, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ SimulationError::Diverged { .. }) => {
            error!("{e}");
            ExitCode::from(EXIT_DIVERGED)
        }
        Err(SimulationError::Invalid(m)) => {
            error!("invalid setup: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            error!("{e}");
            ExitCode::FAILURE
        }
    }
}
