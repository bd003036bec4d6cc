//! Benchmark setups, the text configuration format and run outputs.

mod config;
mod output;

pub use config::{parse_config, parse_config_str};
pub use output::{write_csv_header, write_csv_row, write_snapshot, OutputWriter, RunSummary, SummaryRow};

use serde::{Deserialize, Serialize};

use crate::basis::BasisOptions;
use crate::error::{ConfigError, SimulationError};
use crate::geometry::{Domain, QuadtreeMesh, Slit};
use crate::material::MaterialParams;
use crate::recovery::AdaptControls;
use crate::scalar::Real;
use crate::solver::{BcValue, DirichletSpec, LoadStage, Problem, Region, SolverControls};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Benchmark {
    /// Edge-notched square pulled at the top edge.
    Tension,
    /// Edge-notched square sheared at the top edge.
    Shear,
    /// L-panel lifted on a short patch near the tip of its horizontal arm.
    LShape,
}

impl Benchmark {
    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Tension => "tension",
            Benchmark::Shear => "shear",
            Benchmark::LShape => "lshape",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        match name {
            "tension" => Ok(Benchmark::Tension),
            "shear" => Ok(Benchmark::Shear),
            "lshape" => Ok(Benchmark::LShape),
            other => Err(ConfigError::UnknownScenario(other.to_string())),
        }
    }
}

/// Regularisation length: fixed, or a multiple of the finest element size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LengthScale<T> {
    Absolute(T),
    ElementMultiple(T),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub benchmark: Benchmark,
    pub domain: Domain<T>,
    pub notch: Option<Slit<T>>,
    pub initial_depth: u32,
    pub max_depth: u32,
    pub lambda: T,
    pub mu: T,
    pub gc: T,
    pub kp: T,
    pub length_scale: LengthScale<T>,
    /// mm
    pub thickness: T,
    /// Width of the loaded patch (L-panel only), mm.
    pub load_width: T,
    pub quadrature_order: usize,
}

/// Output switches; zero disables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutputPlan {
    pub snapshot_every: usize,
    pub checkpoint_every: usize,
}

/// Scenario plus every solver knob of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RunConfig<T> {
    pub scenario: Scenario<T>,
    pub solver: SolverControls<T>,
    pub adapt: AdaptControls<T>,
    pub output: OutputPlan,
}

/// Load point of the L-panel, measured from the outer corner.
const LSHAPE_LOAD_X: f64 = 470.0;

impl<T: Real> Scenario<T> {
    pub fn builtin(benchmark: Benchmark) -> Self {
        match benchmark {
            Benchmark::Tension | Benchmark::Shear => Self {
                benchmark,
                domain: Domain::square([T::zero(), T::zero()], T::one()),
                notch: Some(Slit::new([T::zero(), T::half()], [T::half(), T::half()])),
                initial_depth: 4,
                max_depth: 7,
                lambda: T::lit(121.15),
                mu: T::lit(80.77),
                gc: T::lit(2.7e-3),
                kp: T::lit(1e-6),
                length_scale: LengthScale::ElementMultiple(T::two()),
                thickness: T::one(),
                load_width: T::zero(),
                quadrature_order: BasisOptions::default().order,
            },
            Benchmark::LShape => {
                let p = MaterialParams::from_young(T::lit(25.85), T::lit(0.18), T::lit(9.5e-5), T::one(), T::lit(1e-6));
                let initial_depth = 3;
                let arm = T::lit(250.0);
                Self {
                    benchmark,
                    domain: Domain::l_shape([T::zero(), T::zero()], arm),
                    notch: None,
                    initial_depth,
                    max_depth: 8,
                    lambda: p.lambda,
                    mu: p.mu,
                    gc: p.gc,
                    kp: p.kp,
                    length_scale: LengthScale::Absolute(T::two()),
                    thickness: T::lit(100.0),
                    load_width: T::lit(20.0),
                    quadrature_order: BasisOptions::default().order,
                }
            }
        }
    }

    /// Edge length of the finest allowed leaf.
    pub fn min_element_size(&self) -> T {
        self.domain.root_size / T::from_usize_lossy(1usize << self.max_depth)
    }

    pub fn resolved_length_scale(&self) -> T {
        match self.length_scale {
            LengthScale::Absolute(v) => v,
            LengthScale::ElementMultiple(f) => f * self.min_element_size(),
        }
    }

    pub fn material(&self) -> MaterialParams<T> {
        MaterialParams {
            lambda: self.lambda,
            mu: self.mu,
            gc: self.gc,
            lo: self.resolved_length_scale(),
            kp: self.kp,
        }
    }

    pub fn basis_options(&self) -> BasisOptions {
        BasisOptions {
            order: self.quadrature_order,
            ..BasisOptions::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.initial_depth > self.max_depth {
            return bad(format!(
                "initial_depth {} exceeds max_depth {}",
                self.initial_depth, self.max_depth
            ));
        }
        if !(self.thickness > T::zero()) {
            return bad("thickness must be positive".into());
        }
        if self.benchmark == Benchmark::LShape && !(self.load_width > T::zero()) {
            return bad("load_width must be positive".into());
        }
        self.material().validate().map_err(ConfigError::Invalid)?;
        for spec in self.dirichlet() {
            if !on_boundary(&self.domain, &spec.region) {
                return bad(format!("Dirichlet region {:?} is not on the boundary", spec.region));
            }
        }
        Ok(())
    }

    pub fn dirichlet(&self) -> Vec<DirichletSpec<T>> {
        let zero = BcValue::Fixed(T::zero());
        let fix = |region, component, value| DirichletSpec {
            region,
            component,
            value,
        };
        match self.benchmark {
            Benchmark::Tension | Benchmark::Shear => {
                let (lo, hi) = self.domain.bounds();
                let bottom = Region::horizontal(lo[1], lo[0], hi[0]);
                let top = Region::horizontal(hi[1], lo[0], hi[0]);
                let (ux, uy) = if self.benchmark == Benchmark::Tension {
                    (zero, BcValue::Load(T::one()))
                } else {
                    (BcValue::Load(T::one()), zero)
                };
                vec![fix(bottom, 0, zero), fix(bottom, 1, zero), fix(top, 0, ux), fix(top, 1, uy)]
            }
            Benchmark::LShape => {
                let o = self.domain.origin;
                let a = self.domain.root_size;
                let bottom = Region::horizontal(o[1], o[0], o[0] + a);
                let x = o[0] + T::lit(LSHAPE_LOAD_X) * a / T::lit(250.0);
                let w = self.load_width * T::half();
                let patch = Region::horizontal(o[1] + a, x - w, x + w);
                vec![fix(bottom, 0, zero), fix(bottom, 1, zero), fix(patch, 1, BcValue::Load(T::one()))]
            }
        }
    }

    fn reaction(&self) -> (Region<T>, usize) {
        let specs = self.dirichlet();
        let loaded = specs
            .iter()
            .find(|s| matches!(s.value, BcValue::Load(_)))
            .expect("every benchmark has a loaded edge");
        (loaded.region, loaded.component)
    }

    pub fn problem(&self) -> Problem<T> {
        let (reaction_region, reaction_component) = self.reaction();
        Problem {
            params: self.material(),
            thickness: self.thickness,
            dirichlet: self.dirichlet(),
            reaction_region,
            reaction_component,
            basis: self.basis_options(),
        }
    }

    pub fn initial_mesh(&self) -> Result<QuadtreeMesh<T>, SimulationError> {
        let mesh = QuadtreeMesh::build_initial_mesh(self.domain.clone(), self.initial_depth, self.notch.clone())?
            .with_max_depth(self.max_depth)?;
        Ok(mesh)
    }
}

fn inside<T: Real>(domain: &Domain<T>, p: [T; 2]) -> bool {
    domain.roots.iter().any(|r| {
        (0..2).all(|a| {
            let lo = domain.origin[a] + domain.root_size * T::from_i64(r[a]).unwrap();
            p[a] >= lo && p[a] <= lo + domain.root_size
        })
    })
}

/// Region points sit in the closed domain with open space on one side.
fn on_boundary<T: Real>(domain: &Domain<T>, region: &Region<T>) -> bool {
    let eps = domain.root_size * T::lit(1e-6);
    let samples = 9;
    (0..samples).all(|k| {
        let t = T::from_usize_lossy(k) / T::from_usize_lossy(samples - 1);
        let s = region.range[0] + (region.range[1] - region.range[0]) * t;
        let mut p = [T::zero(); 2];
        p[region.axis] = region.at;
        p[1 - region.axis] = s;
        let mut below = p;
        let mut above = p;
        below[region.axis] = region.at - eps;
        above[region.axis] = region.at + eps;
        inside(domain, p) && (inside(domain, below) != inside(domain, above))
    })
}

impl<T: Real> RunConfig<T> {
    pub fn builtin(benchmark: Benchmark) -> Self {
        let scenario = Scenario::builtin(benchmark);
        let stage = |increment: f64, steps| LoadStage {
            increment: T::lit(increment),
            steps,
        };
        let schedule = match benchmark {
            Benchmark::Tension => vec![stage(1e-5, 500), stage(5e-6, 600)],
            Benchmark::Shear => vec![stage(2e-5, 1000)],
            Benchmark::LShape => vec![stage(1e-2, 150)],
        };
        Self {
            scenario,
            solver: SolverControls {
                schedule,
                max_stagger_iter: 2000,
                stop_below: Some(T::lit(0.05)),
                ..SolverControls::default()
            },
            adapt: AdaptControls::default(),
            output: OutputPlan::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario.validate()?;
        self.solver.validate().map_err(ConfigError::Invalid)?;
        if self.solver.schedule.iter().any(|s| !(s.increment.abs() > T::zero())) {
            return Err(ConfigError::Invalid("load increments must be non-zero".into()));
        }
        let a = &self.adapt;
        if !(a.theta_bulk <= T::one() && a.support_factor > T::zero() && a.tolerance >= T::zero()) {
            return Err(ConfigError::Invalid("adaptivity controls out of range".into()));
        }
        Ok(())
    }
}

/// The three built-in benchmarks with their default controls.
pub fn builtin_scenarios<T: Real>() -> Vec<RunConfig<T>> {
    [Benchmark::Tension, Benchmark::Shear, Benchmark::LShape]
        .into_iter()
        .map(RunConfig::builtin)
        .collect()
}
