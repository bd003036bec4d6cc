use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::RunConfig;
use crate::error::SimulationError;
use crate::geometry::{write_vtk_mesh, VtkData};
use crate::scalar::Real;
use crate::solver::{element_von_mises, Checkpoint, Simulation, StepRecord};

pub fn write_csv_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "step,displacement,reaction,elements,dofs")
}

pub fn write_csv_row<T: Real, W: Write>(w: &mut W, r: &StepRecord<T>) -> io::Result<()> {
    writeln!(
        w,
        "{},{:e},{:e},{},{}",
        r.step,
        r.displacement.to_f64_lossy(),
        r.reaction.to_f64_lossy(),
        r.elements,
        r.dofs
    )
}

/// Legacy VTK snapshot: point data `phi` and `u`, cell data `von_mises`.
pub fn write_snapshot<T: Real, W: Write>(w: &mut W, sim: &Simulation<T>, title: &str) -> io::Result<()> {
    let f = sim.fields();
    let vm = element_von_mises(sim.bases(), &f.u, &f.phi, &sim.problem.params);
    let data = VtkData {
        point_scalars: vec![("phi", &f.phi[..])],
        point_vectors: vec![("u", &f.u[..])],
        cell_scalars: vec![("von_mises", &vm[..])],
    };
    write_vtk_mesh(w, title, sim.mesh().nodes(), sim.elements(), &data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow<T> {
    pub step: usize,
    pub displacement: T,
    pub reaction: T,
    pub elements: usize,
    pub dofs: usize,
    pub iterations: usize,
    pub peak_phi: T,
    /// Seconds since the run started.
    pub wall: f64,
}

/// Per-step counts collected for `summary.txt`.
#[derive(Debug, Clone, Default)]
pub struct RunSummary<T> {
    pub config: String,
    pub initial_elements: usize,
    pub initial_dofs: usize,
    pub rows: Vec<SummaryRow<T>>,
    pub outcome: String,
}

impl<T: Real> RunSummary<T> {
    pub fn render(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "# effective configuration");
        for l in self.config.lines() {
            let _ = writeln!(o, "#   {l}");
        }
        let _ = writeln!(o, "initial elements: {}", self.initial_elements);
        let _ = writeln!(o, "initial dofs: {}", self.initial_dofs);
        let _ = writeln!(o, "\nstep displacement reaction elements dofs iterations peak_phi wall_s");
        for r in &self.rows {
            let _ = writeln!(
                o,
                "{} {:e} {:e} {} {} {} {:.4} {:.2}",
                r.step,
                r.displacement.to_f64_lossy(),
                r.reaction.to_f64_lossy(),
                r.elements,
                r.dofs,
                r.iterations,
                r.peak_phi.to_f64_lossy(),
                r.wall
            );
        }
        let last = self.rows.last();
        let _ = writeln!(o, "\nsteps: {}", self.rows.len());
        let _ = writeln!(o, "final elements: {}", last.map_or(self.initial_elements, |r| r.elements));
        let _ = writeln!(o, "final dofs: {}", last.map_or(self.initial_dofs, |r| r.dofs));
        let peak = self.rows.iter().map(|r| r.reaction.abs()).fold(T::zero(), |a, b| a.max(b));
        let _ = writeln!(o, "peak reaction: {:e}", peak.to_f64_lossy());
        let _ = writeln!(o, "wall time: {:.2} s", last.map_or(0.0, |r| r.wall));
        let _ = writeln!(o, "outcome: {}", self.outcome);
        o
    }
}

/// Writes `load_disp.csv`, snapshots and checkpoints as steps complete.
#[derive(Debug)]
pub struct OutputWriter<T> {
    dir: PathBuf,
    csv: BufWriter<File>,
    snapshot_every: usize,
    checkpoint_every: usize,
    records: Vec<StepRecord<T>>,
    summary: RunSummary<T>,
    start: Instant,
}

impl<T: Real> OutputWriter<T> {
    pub fn create(dir: &Path, config: &RunConfig<T>) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let mut csv = BufWriter::new(File::create(dir.join("load_disp.csv"))?);
        write_csv_header(&mut csv)?;
        csv.flush()?;
        Ok(Self {
            dir: dir.to_path_buf(),
            csv,
            snapshot_every: config.output.snapshot_every,
            checkpoint_every: config.output.checkpoint_every,
            records: Vec::new(),
            summary: RunSummary {
                config: config.to_config_string(),
                ..RunSummary::default()
            },
            start: Instant::now(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn records(&self) -> &[StepRecord<T>] {
        &self.records
    }

    fn snapshot(&self, sim: &Simulation<T>, name: &str) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        let title = format!("step {} u = {:e}", sim.step_index(), sim.applied().to_f64_lossy());
        write_snapshot(&mut w, sim, &title)?;
        w.flush()
    }

    /// Called once the initial mesh is settled.
    pub fn start(&mut self, sim: &Simulation<T>) -> io::Result<()> {
        self.summary.initial_elements = sim.elements().len();
        self.summary.initial_dofs = 3 * sim.mesh().num_nodes();
        if self.snapshot_every > 0 {
            self.snapshot(sim, "snapshot_00000.vtk")?;
        }
        Ok(())
    }

    pub fn observe(&mut self, sim: &Simulation<T>, rec: &StepRecord<T>) -> Result<(), SimulationError> {
        write_csv_row(&mut self.csv, rec)?;
        self.csv.flush()?;
        self.records.push(rec.clone());
        self.summary.rows.push(SummaryRow {
            step: rec.step,
            displacement: rec.displacement,
            reaction: rec.reaction,
            elements: rec.elements,
            dofs: rec.dofs,
            iterations: rec.iterations,
            peak_phi: rec.peak_phi,
            wall: self.start.elapsed().as_secs_f64(),
        });
        if self.snapshot_every > 0 && rec.step % self.snapshot_every == 0 {
            self.snapshot(sim, &format!("snapshot_{:05}.vtk", rec.step))?;
        }
        if self.checkpoint_every > 0 && rec.step % self.checkpoint_every == 0 {
            let w = BufWriter::new(File::create(self.dir.join("checkpoint.json"))?);
            Checkpoint::capture(sim, &self.records).write(w)?;
        }
        Ok(())
    }

    /// Writes `summary.txt` (and a last snapshot when snapshots are on).
    pub fn finish(mut self, sim: Option<&Simulation<T>>, outcome: &str) -> io::Result<RunSummary<T>> {
        if let (Some(sim), true) = (sim, self.snapshot_every > 0) {
            self.snapshot(sim, "snapshot_final.vtk")?;
        }
        self.summary.outcome = outcome.to_string();
        fs::write(self.dir.join("summary.txt"), self.summary.render())?;
        self.csv.flush()?;
        Ok(self.summary)
    }
}
