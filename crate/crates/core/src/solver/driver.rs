use serde::{Deserialize, Serialize};

use super::fields::quadrature_energies;
use super::problem::{Problem, SolverControls};
use crate::assembly::{reaction_force, Assembler, CsrMatrix, DirichletPlan, SpdSolver};
use crate::basis::{build_element_bases, ElementBasis};
use crate::error::SimulationError;
use crate::geometry::{PolygonElement, QuadtreeMesh};
use crate::material::{apply_hybrid_constraint, nodal_average};
use crate::recovery::{
    error_report, initial_mesh_convergence, refine_and_transfer, select_cells, AdaptControls,
    FieldState, MlsModel,
};
use crate::scalar::Real;

/// One converged load step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord<T> {
    pub step: usize,
    /// Applied displacement (mm).
    pub displacement: T,
    /// Reaction in the reported component (kN).
    pub reaction: T,
    pub reaction_xy: [T; 2],
    pub iterations: usize,
    pub elements: usize,
    pub nodes: usize,
    /// `3 * nodes`.
    pub dofs: usize,
    /// Leaves split during this step, inside and after the staggered loop.
    pub refined: usize,
    pub peak_phi: T,
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// `|curr - prev| / |curr|`; zero when both vanish, infinite when only
/// `curr` does.
pub fn relative_change<T: Real>(prev: &[T], curr: &[T]) -> T {
    let diff = prev
        .iter()
        .zip(curr)
        .map(|(&a, &b)| (b - a) * (b - a))
        .sum::<T>()
        .sqrt();
    let n = norm(curr);
    if diff == T::zero() {
        T::zero()
    } else if n == T::zero() {
        T::infinity()
    } else {
        diff / n
    }
}

/// Larger of the relative displacement and phase-field changes.
pub fn convergence_norm<T: Real>(prev: (&[T], &[T]), curr: (&[T], &[T])) -> T {
    relative_change(prev.0, curr.0).max(relative_change(prev.1, curr.1))
}

/// Live state of an adaptive staggered run.
#[derive(Debug)]
pub struct Simulation<T> {
    pub problem: Problem<T>,
    pub controls: SolverControls<T>,
    pub adapt: AdaptControls<T>,
    mesh: QuadtreeMesh<T>,
    elements: Vec<PolygonElement>,
    bases: Vec<ElementBasis<T>>,
    assembler: Assembler,
    plan: DirichletPlan,
    fields: FieldState<T>,
    u_solver: SpdSolver,
    phi_solver: SpdSolver,
    step: usize,
    applied: T,
}

impl<T: Real> Simulation<T> {
    pub fn new(
        problem: Problem<T>,
        controls: SolverControls<T>,
        adapt: AdaptControls<T>,
        mesh: QuadtreeMesh<T>,
    ) -> Result<Self, SimulationError> {
        controls.validate().map_err(SimulationError::Invalid)?;
        problem.params.validate().map_err(SimulationError::Invalid)?;
        let elements = mesh.extract_elements();
        let bases = build_element_bases(&elements, mesh.nodes(), problem.basis)?;
        let fields = FieldState::zeros(mesh.num_nodes(), &bases);
        let assembler = Assembler::new(&bases, mesh.num_nodes());
        let plan = Self::make_plan(&problem, &mesh, &assembler)?;
        Ok(Self {
            problem,
            controls,
            adapt,
            mesh,
            elements,
            bases,
            assembler,
            plan,
            fields,
            u_solver: SpdSolver::new(),
            phi_solver: SpdSolver::new(),
            step: 0,
            applied: T::zero(),
        })
    }

    fn make_plan(
        problem: &Problem<T>,
        mesh: &QuadtreeMesh<T>,
        assembler: &Assembler,
    ) -> Result<DirichletPlan, SimulationError> {
        let dofs: Vec<usize> = problem.constraints(mesh, T::zero()).iter().map(|c| c.0).collect();
        if dofs.is_empty() {
            return Err(SimulationError::Invalid("no Dirichlet nodes found".into()));
        }
        Ok(DirichletPlan::new(assembler.u_pattern().clone(), &dofs)?)
    }

    pub fn mesh(&self) -> &QuadtreeMesh<T> {
        &self.mesh
    }

    pub fn elements(&self) -> &[PolygonElement] {
        &self.elements
    }

    pub fn bases(&self) -> &[ElementBasis<T>] {
        &self.bases
    }

    pub fn fields(&self) -> &FieldState<T> {
        &self.fields
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn applied(&self) -> T {
        self.applied
    }

    /// Replaces mesh and fields, e.g. from a checkpoint.
    pub fn restore(&mut self, mesh: QuadtreeMesh<T>, fields: FieldState<T>, step: usize, applied: T) -> Result<(), SimulationError> {
        let elements = mesh.extract_elements();
        let bases = build_element_bases(&elements, mesh.nodes(), self.problem.basis)?;
        if fields.phi.len() != mesh.num_nodes() || fields.history.num_elements() != elements.len() {
            return Err(SimulationError::Invalid("field sizes do not match the mesh".into()));
        }
        self.mesh = mesh;
        self.install(elements, bases)?;
        self.fields = fields;
        self.step = step;
        self.applied = applied;
        Ok(())
    }

    fn install(&mut self, elements: Vec<PolygonElement>, bases: Vec<ElementBasis<T>>) -> Result<(), SimulationError> {
        self.assembler = Assembler::new(&bases, self.mesh.num_nodes());
        self.plan = Self::make_plan(&self.problem, &self.mesh, &self.assembler)?;
        self.elements = elements;
        self.bases = bases;
        Ok(())
    }

    fn prescribed(&self, applied: T) -> Vec<T> {
        let mut v = vec![T::zero(); self.assembler.dofs.num_u()];
        for (d, x) in self.problem.constraints(&self.mesh, applied) {
            v[d] = x;
        }
        v
    }

    fn solve_u(&mut self, phi: &[T], applied: T) -> Result<(Vec<T>, CsrMatrix<T>, Vec<T>), SimulationError> {
        let sys = self
            .assembler
            .elasticity(&self.bases, phi, &self.problem.params, self.problem.thickness)?;
        let prescribed = self.prescribed(applied);
        let (k, f) = self.plan.reduce(&sys.matrix, &sys.rhs, &prescribed);
        let x = self.u_solver.solve(&k, &f)?;
        Ok((self.plan.expand(&x, &prescribed), sys.matrix, sys.rhs))
    }

    /// Refines the mesh around the notch on the elastic problem at the first
    /// load increment. Returns the number of refinement passes.
    pub fn converge_initial_mesh(&mut self) -> Result<usize, SimulationError> {
        let applied = self
            .controls
            .load_path()
            .first()
            .copied()
            .unwrap_or(T::one());
        let problem = self.problem.clone();
        let d = problem.params.constitutive_matrix();
        let passes = initial_mesh_convergence(&mut self.mesh, problem.basis, &d, &self.adapt, |mesh, _, bases| {
            let asm = Assembler::new(bases, mesh.num_nodes());
            let plan = Self::make_plan(&problem, mesh, &asm)?;
            let phi = vec![T::zero(); mesh.num_nodes()];
            let sys = asm.elasticity(bases, &phi, &problem.params, problem.thickness)?;
            let mut prescribed = vec![T::zero(); asm.dofs.num_u()];
            for (dof, v) in problem.constraints(mesh, applied) {
                prescribed[dof] = v;
            }
            let (k, f) = plan.reduce(&sys.matrix, &sys.rhs, &prescribed);
            let x = SpdSolver::new().solve(&k, &f)?;
            Ok(plan.expand(&x, &prescribed))
        })?;
        let elements = self.mesh.extract_elements();
        let bases = build_element_bases(&elements, self.mesh.nodes(), self.problem.basis)?;
        self.fields = FieldState::zeros(self.mesh.num_nodes(), &bases);
        self.install(elements, bases)?;
        Ok(passes)
    }

    /// Marks and refines with the current fields; returns the number of
    /// split leaves.
    fn adapt_mesh(&mut self, u: &[T], phi: &[T]) -> Result<usize, SimulationError> {
        if !self.adapt.enabled {
            return Ok(0);
        }
        let model = MlsModel::from_mesh(&self.mesh, &self.elements, self.adapt.support_factor);
        let d = self.problem.params.constitutive_matrix();
        let report = error_report(&self.bases, u, &model, &d)?;
        let cells = select_cells(
            &self.mesh,
            &self.elements,
            Some(&report),
            phi,
            self.problem.params.lo,
            &self.adapt,
        );
        if cells.is_empty() {
            return Ok(0);
        }
        let state = FieldState {
            u: u.to_vec(),
            phi: phi.to_vec(),
            history: self.fields.history.clone(),
        };
        let t = refine_and_transfer(&mut self.mesh, &self.elements, &self.bases, &state, &cells, self.problem.basis)?;
        let split = t.report.split.len();
        self.install(t.elements, t.bases)?;
        self.fields = t.fields;
        Ok(split)
    }

    /// Advances to applied displacement `applied` and converges the staggered
    /// iteration.
    pub fn solve_step(&mut self, applied: T) -> Result<StepRecord<T>, SimulationError> {
        self.step += 1;
        let params = self.problem.params;
        let mut u = self.fields.u.clone();
        let mut phi = self.fields.phi.clone();
        let mut refined = 0;
        let mut iteration = 0;
        let mut reentered = false;
        let mut held: Vec<bool> = Vec::new();
        let (k_full, f_full) = loop {
            iteration += 1;
            let (psi_pos, psi_neg) = quadrature_energies(&self.bases, &u, &params);
            let mut trial = self.fields.history.clone();
            trial.raise_to(&psi_pos);
            let sys = self.assembler.phase(&self.bases, &trial, &params)?;
            let mut phi_new = self.phi_solver.solve(&sys.matrix, &sys.rhs)?;
            let n = self.mesh.num_nodes();
            let np = nodal_average(&self.bases, &psi_pos, n);
            let nn = nodal_average(&self.bases, &psi_neg, n);
            let mut pinned = apply_hybrid_constraint(&mut phi_new, &np, &nn);
            // nodes pinned earlier in this step stay pinned
            held.resize(n, false);
            for i in 0..n {
                if np[i] < nn[i] {
                    held[i] = true;
                } else if held[i] {
                    pinned += usize::from(phi_new[i] != T::zero());
                    phi_new[i] = T::zero();
                }
            }
            for v in phi_new.iter_mut() {
                *v = v.max(T::zero()).min(T::one());
            }
            let (u_new, k, f) = self.solve_u(&phi_new, applied)?;
            let change = convergence_norm((&u, &phi), (&u_new, &phi_new));
            log::trace!(
                "step {} iteration {}: du {:e} dphi {:e} pinned {}",
                self.step,
                iteration,
                relative_change(&u, &u_new).to_f64_lossy(),
                relative_change(&phi, &phi_new).to_f64_lossy(),
                pinned
            );
            u = u_new;
            phi = phi_new;
            if !reentered && change <= self.controls.tolerance {
                log::trace!("step {} converged: {:e}", self.step, change.to_f64_lossy());
                break (k, f);
            }
            reentered = false;
            if iteration >= self.controls.max_stagger_iter {
                self.fields.u = u;
                self.fields.phi = phi;
                return Err(SimulationError::Diverged {
                    step: self.step,
                    displacement: applied.to_f64_lossy(),
                    iterations: iteration,
                    residual: change.to_f64_lossy(),
                });
            }
            if iteration % self.controls.num_iter == 0 {
                let split = self.adapt_mesh(&u, &phi)?;
                if split > 0 {
                    refined += split;
                    u = self.fields.u.clone();
                    phi = self.fields.phi.clone();
                    reentered = true;
                }
            }
        };
        let (psi_pos, _) = quadrature_energies(&self.bases, &u, &params);
        self.fields.history.raise_to(&psi_pos);
        self.fields.u = u;
        self.fields.phi = phi;
        self.applied = applied;

        let nodes = self.problem.reaction_region.nodes(&self.mesh);
        let r = reaction_force(&k_full, &self.fields.u, &f_full, &nodes);
        let record = StepRecord {
            step: self.step,
            displacement: applied,
            reaction: r[self.problem.reaction_component],
            reaction_xy: r,
            iterations: iteration,
            elements: self.elements.len(),
            nodes: self.mesh.num_nodes(),
            dofs: 3 * self.mesh.num_nodes(),
            refined,
            peak_phi: self.fields.phi.iter().fold(T::zero(), |a, &b| a.max(b)),
        };
        log::debug!(
            "step {} u={:e} R={:e} iters={} elements={}",
            record.step,
            applied.to_f64_lossy(),
            record.reaction.to_f64_lossy(),
            iteration,
            record.elements
        );
        Ok(record)
    }

    /// Post-step mesh update; returns the number of split leaves.
    pub fn adapt_after_step(&mut self) -> Result<usize, SimulationError> {
        let every = self.adapt.adapt_every;
        if every == 0 || self.step % every != 0 {
            return Ok(0);
        }
        let u = self.fields.u.clone();
        let phi = self.fields.phi.clone();
        self.adapt_mesh(&u, &phi)
    }

    /// Runs the whole load schedule. `observer` sees every record after the
    /// post-step mesh update.
    pub fn run<F>(&mut self, mut observer: F) -> Result<Vec<StepRecord<T>>, SimulationError>
    where
        F: FnMut(&Simulation<T>, &StepRecord<T>) -> Result<(), SimulationError>,
    {
        let path = self.controls.load_path();
        let mut records = Vec::with_capacity(path.len());
        let mut peak = T::zero();
        for applied in path.into_iter().skip(self.step) {
            let mut rec = self.solve_step(applied)?;
            rec.refined += self.adapt_after_step()?;
            observer(self, &rec)?;
            let r = rec.reaction.abs();
            peak = peak.max(r);
            records.push(rec);
            if let Some(f) = self.controls.stop_below {
                if peak > T::zero() && r < f * peak {
                    break;
                }
            }
        }
        Ok(records)
    }
}

/// Final state and records of a run.
#[derive(Debug)]
pub struct SimulationResult<T> {
    pub records: Vec<StepRecord<T>>,
    pub simulation: Simulation<T>,
}

/// Initial mesh convergence followed by the full load schedule.
pub fn run_simulation<T, F>(
    problem: Problem<T>,
    controls: SolverControls<T>,
    adapt: AdaptControls<T>,
    mesh: QuadtreeMesh<T>,
    observer: F,
) -> Result<SimulationResult<T>, SimulationError>
where
    T: Real,
    F: FnMut(&Simulation<T>, &StepRecord<T>) -> Result<(), SimulationError>,
{
    let mut sim = Simulation::new(problem, controls, adapt, mesh)?;
    sim.converge_initial_mesh()?;
    let records = sim.run(observer)?;
    Ok(SimulationResult {
        records,
        simulation: sim,
    })
}
