use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::driver::{Simulation, StepRecord};
use crate::error::SimulationError;
use crate::geometry::QuadtreeMesh;
use crate::recovery::FieldState;
use crate::scalar::Real;

pub const CHECKPOINT_FORMAT: &str = "pfquad-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Restartable snapshot: the tree, committed fields and the records so far.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Checkpoint<T> {
    pub format: String,
    pub version: u32,
    pub step: usize,
    pub applied: T,
    pub mesh: QuadtreeMesh<T>,
    pub fields: FieldState<T>,
    pub records: Vec<StepRecord<T>>,
}

impl<T: Real> Checkpoint<T> {
    pub fn capture(sim: &Simulation<T>, records: &[StepRecord<T>]) -> Self {
        Self {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            step: sim.step_index(),
            applied: sim.applied(),
            mesh: sim.mesh().clone(),
            fields: sim.fields().clone(),
            records: records.to_vec(),
        }
    }

    pub fn write<W: Write>(&self, w: W) -> Result<(), SimulationError> {
        serde_json::to_writer(w, self).map_err(|e| SimulationError::Io(e.into()))
    }

    pub fn read<R: Read>(r: R) -> Result<Self, SimulationError> {
        let c: Self = serde_json::from_reader(r).map_err(|e| SimulationError::Io(e.into()))?;
        if c.format != CHECKPOINT_FORMAT || c.version != CHECKPOINT_VERSION {
            return Err(SimulationError::Invalid(format!(
                "unsupported checkpoint {} v{}",
                c.format, c.version
            )));
        }
        Ok(c)
    }

    /// Loads the snapshot into `sim`, which must have been built for the same
    /// problem.
    pub fn restore(self, sim: &mut Simulation<T>) -> Result<Vec<StepRecord<T>>, SimulationError> {
        sim.restore(self.mesh, self.fields, self.step, self.applied)?;
        Ok(self.records)
    }
}
