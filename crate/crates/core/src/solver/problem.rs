use serde::{Deserialize, Serialize};

use crate::basis::BasisOptions;
use crate::geometry::{NodeId, QuadtreeMesh};
use crate::material::MaterialParams;
use crate::scalar::{Point2, Real};

/// Axis-aligned boundary segment: points whose coordinate `axis` equals `at`
/// and whose other coordinate lies in `range`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub axis: usize,
    pub at: T,
    pub range: [T; 2],
}

impl<T: Real> Region<T> {
    pub fn horizontal(y: T, x0: T, x1: T) -> Self {
        Self {
            axis: 1,
            at: y,
            range: [x0, x1],
        }
    }

    pub fn vertical(x: T, y0: T, y1: T) -> Self {
        Self {
            axis: 0,
            at: x,
            range: [y0, y1],
        }
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        let other = p[1 - self.axis];
        (p[self.axis] - self.at).abs() <= tol
            && other >= self.range[0] - tol
            && other <= self.range[1] + tol
    }

    pub fn nodes(&self, mesh: &QuadtreeMesh<T>) -> Vec<NodeId> {
        let tol = mesh.domain().root_size * T::lit(1e-9);
        mesh.nodes()
            .iter()
            .enumerate()
            .filter(|(_, &p)| self.contains(p, tol))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BcValue<T> {
    /// Constant prescribed displacement (mm).
    Fixed(T),
    /// Multiple of the applied load displacement.
    Load(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletSpec<T> {
    pub region: Region<T>,
    /// 0 for `u_x`, 1 for `u_y`.
    pub component: usize,
    pub value: BcValue<T>,
}

/// Everything the staggered driver needs besides the mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem<T> {
    pub params: MaterialParams<T>,
    /// Out-of-plane thickness (mm).
    pub thickness: T,
    pub dirichlet: Vec<DirichletSpec<T>>,
    /// Reaction force is summed over these nodes.
    pub reaction_region: Region<T>,
    /// Force component reported in step records.
    pub reaction_component: usize,
    pub basis: BasisOptions,
}

impl<T: Real> Problem<T> {
    /// Sorted, de-duplicated `(dof, value)` pairs at load `applied`. Later
    /// specs win on conflicting dofs.
    pub fn constraints(&self, mesh: &QuadtreeMesh<T>, applied: T) -> Vec<(usize, T)> {
        let mut map = std::collections::BTreeMap::new();
        for spec in &self.dirichlet {
            let v = match spec.value {
                BcValue::Fixed(v) => v,
                BcValue::Load(f) => f * applied,
            };
            for n in spec.region.nodes(mesh) {
                map.insert(2 * n + spec.component, v);
            }
        }
        map.into_iter().collect()
    }
}

/// Load increments: `steps` steps of `increment` per stage, in order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadStage<T> {
    pub increment: T,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverControls<T> {
    /// Relative change below which the staggered loop stops.
    pub tolerance: T,
    /// Iteration count that triggers a mesh update inside a step.
    pub num_iter: usize,
    pub max_stagger_iter: usize,
    pub schedule: Vec<LoadStage<T>>,
    /// Stop once the reaction falls below this fraction of its peak.
    pub stop_below: Option<T>,
}

impl<T: Real> Default for SolverControls<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-4),
            num_iter: 5,
            max_stagger_iter: 200,
            schedule: Vec::new(),
            stop_below: None,
        }
    }
}

impl<T: Real> SolverControls<T> {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > T::zero()) {
            return Err("tolerance must be positive".into());
        }
        if self.num_iter < 1 || self.num_iter > self.max_stagger_iter {
            return Err("num_iter must lie in [1, max_stagger_iter]".into());
        }
        Ok(())
    }

    /// Applied displacement after each step.
    pub fn load_path(&self) -> Vec<T> {
        let mut out = Vec::new();
        let mut start = T::zero();
        for stage in &self.schedule {
            for k in 1..=stage.steps {
                out.push(start + stage.increment * T::from_usize_lossy(k));
            }
            if let Some(&last) = out.last() {
                start = last;
            }
        }
        out
    }
}
