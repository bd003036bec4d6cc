use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{Benchmark, LengthScale, RunConfig};
use crate::error::ConfigError;
use crate::material::MaterialParams;
use crate::scalar::Real;
use crate::solver::LoadStage;

struct Entry<'a> {
    line: usize,
    section: &'a str,
    key: &'a str,
    value: &'a str,
}

fn tokenize(text: &str) -> Result<Vec<Entry<'_>>, ConfigError> {
    let mut section = "";
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("unterminated section header `{s}`"),
            })?;
            section = name.trim();
            if !SECTIONS.contains(&section) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("unknown section [{section}]"),
                });
            }
            continue;
        }
        let (key, value) = s.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, found `{s}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key or value".into(),
            });
        }
        out.push(Entry {
            line,
            section,
            key,
            value,
        });
    }
    Ok(out)
}

const SECTIONS: [&str; 7] = ["", "mesh", "material", "load", "solver", "adapt", "output"];

fn value_err(e: &Entry<'_>, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        line: e.line,
        key: e.key.to_string(),
        message: message.into(),
    }
}

fn parse<V: FromStr>(e: &Entry<'_>) -> Result<V, ConfigError> {
    e.value
        .parse()
        .map_err(|_| value_err(e, format!("cannot parse `{}`", e.value)))
}

fn real<T: Real>(e: &Entry<'_>) -> Result<T, ConfigError> {
    let v: f64 = parse(e)?;
    if !v.is_finite() {
        return Err(value_err(e, "must be finite"));
    }
    Ok(T::lit(v))
}

fn positive<T: Real>(e: &Entry<'_>) -> Result<T, ConfigError> {
    let v = real::<T>(e)?;
    if v > T::zero() {
        Ok(v)
    } else {
        Err(value_err(e, "must be positive"))
    }
}

fn fraction<T: Real>(e: &Entry<'_>) -> Result<T, ConfigError> {
    let v = real::<T>(e)?;
    if v >= T::zero() && v <= T::one() {
        Ok(v)
    } else {
        Err(value_err(e, "must lie in [0, 1]"))
    }
}

fn depth(e: &Entry<'_>) -> Result<u32, ConfigError> {
    let v: u32 = parse(e)?;
    if v > 20 {
        return Err(value_err(e, "depth above 20"));
    }
    Ok(v)
}

/// `lo = 0.01` or `lo = 2h`.
fn length_scale<T: Real>(e: &Entry<'_>) -> Result<LengthScale<T>, ConfigError> {
    if let Some(f) = e.value.strip_suffix('h') {
        let f: f64 = f
            .trim()
            .parse()
            .map_err(|_| value_err(e, format!("cannot parse `{}`", e.value)))?;
        if !(f > 0.0 && f.is_finite()) {
            return Err(value_err(e, "must be positive"));
        }
        return Ok(LengthScale::ElementMultiple(T::lit(f)));
    }
    positive(e).map(LengthScale::Absolute)
}

/// `stage = 1e-5 x 500`
fn stage<T: Real>(e: &Entry<'_>) -> Result<LoadStage<T>, ConfigError> {
    let bad = || value_err(e, "expected `increment x steps`");
    let (inc, steps) = e.value.split_once('x').ok_or_else(bad)?;
    let increment: f64 = inc.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if !(increment.is_finite() && increment != 0.0) || steps == 0 {
        return Err(value_err(e, "increment must be non-zero and steps positive"));
    }
    Ok(LoadStage {
        increment: T::lit(increment),
        steps,
    })
}

/// Parses configuration text on top of a built-in scenario. The scenario is
/// `name` when given, else the top-level `scenario` key.
pub fn parse_config_str<T: Real>(text: &str, name: Option<&str>) -> Result<RunConfig<T>, ConfigError> {
    let entries = tokenize(text)?;
    let from_file = entries.iter().find(|e| e.section.is_empty() && e.key == "scenario");
    let name = match (name, from_file) {
        (Some(n), _) => n.to_string(),
        (None, Some(e)) => e.value.to_string(),
        (None, None) => return Err(ConfigError::Invalid("no scenario selected".into())),
    };
    let mut cfg = RunConfig::<T>::builtin(Benchmark::from_name(&name)?);
    let mut young = None;
    let mut poisson = None;
    let mut custom_schedule = false;
    for e in &entries {
        let s = &mut cfg.scenario;
        match (e.section, e.key) {
            ("", "scenario") => {
                Benchmark::from_name(e.value)?;
            }
            ("mesh", "initial_depth") => s.initial_depth = depth(e)?,
            ("mesh", "max_depth") => s.max_depth = depth(e)?,
            ("mesh", "quadrature_order") => {
                let v: usize = parse(e)?;
                if !(1..=5).contains(&v) {
                    return Err(value_err(e, "quadrature order must lie in 1..=5"));
                }
                s.quadrature_order = v;
            }
            ("material", "lambda") => s.lambda = real(e)?,
            ("material", "mu") => s.mu = positive(e)?,
            ("material", "young") => young = Some(positive::<T>(e)?),
            ("material", "poisson") => {
                let v = real::<T>(e)?;
                if !(v > -T::one() && v < T::half()) {
                    return Err(value_err(e, "must lie in (-1, 0.5)"));
                }
                poisson = Some(v);
            }
            ("material", "gc") => s.gc = positive(e)?,
            ("material", "kp") => s.kp = positive(e)?,
            ("material", "lo") => s.length_scale = length_scale(e)?,
            ("material", "thickness") => s.thickness = positive(e)?,
            ("load", "stage") => {
                if !custom_schedule {
                    cfg.solver.schedule.clear();
                    custom_schedule = true;
                }
                cfg.solver.schedule.push(stage(e)?);
            }
            ("load", "stop_below") => {
                cfg.solver.stop_below = if e.value == "none" { None } else { Some(fraction(e)?) };
            }
            ("load", "load_width") => s.load_width = positive(e)?,
            ("solver", "tolerance") => cfg.solver.tolerance = positive(e)?,
            ("solver", "num_iter") => cfg.solver.num_iter = parse(e)?,
            ("solver", "max_stagger_iter") => cfg.solver.max_stagger_iter = parse(e)?,
            ("adapt", "enabled") => cfg.adapt.enabled = parse(e)?,
            ("adapt", "theta_bulk") => cfg.adapt.theta_bulk = fraction(e)?,
            ("adapt", "error_tolerance") => {
                let v = real::<T>(e)?;
                if v < T::zero() {
                    return Err(value_err(e, "must be non-negative"));
                }
                cfg.adapt.tolerance = v;
            }
            ("adapt", "phi_mark") => cfg.adapt.phi_mark = fraction(e)?,
            ("adapt", "support_factor") => cfg.adapt.support_factor = positive(e)?,
            ("adapt", "adapt_every") => cfg.adapt.adapt_every = parse(e)?,
            ("output", "snapshot_every") => cfg.output.snapshot_every = parse(e)?,
            ("output", "checkpoint_every") => cfg.output.checkpoint_every = parse(e)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: e.line,
                    section: e.section.to_string(),
                    key: e.key.to_string(),
                })
            }
        }
    }
    if young.is_some() || poisson.is_some() {
        let cur = cfg.scenario.material();
        let p = MaterialParams::from_young(
            young.unwrap_or_else(|| cur.young()),
            poisson.unwrap_or_else(|| cur.poisson()),
            cur.gc,
            cur.lo,
            cur.kp,
        );
        cfg.scenario.lambda = p.lambda;
        cfg.scenario.mu = p.mu;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and parses a configuration file.
pub fn parse_config<T: Real>(path: &Path, name: Option<&str>) -> Result<RunConfig<T>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config_str(&text, name)
}

impl<T: Real> RunConfig<T> {
    /// Effective settings in the configuration syntax; parsing the result
    /// reproduces `self`.
    pub fn to_config_string(&self) -> String {
        let s = &self.scenario;
        let f = |v: T| format!("{:e}", v.to_f64_lossy());
        let mut o = String::new();
        let _ = writeln!(o, "scenario = {}", s.benchmark.name());
        let _ = writeln!(o, "\n[mesh]");
        let _ = writeln!(o, "initial_depth = {}", s.initial_depth);
        let _ = writeln!(o, "max_depth = {}", s.max_depth);
        let _ = writeln!(o, "quadrature_order = {}", s.quadrature_order);
        let _ = writeln!(o, "\n[material]");
        let _ = writeln!(o, "lambda = {}", f(s.lambda));
        let _ = writeln!(o, "mu = {}", f(s.mu));
        let _ = writeln!(o, "gc = {}", f(s.gc));
        let _ = writeln!(o, "kp = {}", f(s.kp));
        match s.length_scale {
            LengthScale::Absolute(v) => {
                let _ = writeln!(o, "lo = {}", f(v));
            }
            LengthScale::ElementMultiple(m) => {
                let _ = writeln!(o, "lo = {}h", m.to_f64_lossy());
            }
        }
        let _ = writeln!(o, "thickness = {}", f(s.thickness));
        let _ = writeln!(o, "\n[load]");
        for st in &self.solver.schedule {
            let _ = writeln!(o, "stage = {} x {}", f(st.increment), st.steps);
        }
        match self.solver.stop_below {
            Some(v) => {
                let _ = writeln!(o, "stop_below = {}", f(v));
            }
            None => {
                let _ = writeln!(o, "stop_below = none");
            }
        }
        if s.benchmark == Benchmark::LShape {
            let _ = writeln!(o, "load_width = {}", f(s.load_width));
        }
        let _ = writeln!(o, "\n[solver]");
        let _ = writeln!(o, "tolerance = {}", f(self.solver.tolerance));
        let _ = writeln!(o, "num_iter = {}", self.solver.num_iter);
        let _ = writeln!(o, "max_stagger_iter = {}", self.solver.max_stagger_iter);
        let a = &self.adapt;
        let _ = writeln!(o, "\n[adapt]");
        let _ = writeln!(o, "enabled = {}", a.enabled);
        let _ = writeln!(o, "theta_bulk = {}", f(a.theta_bulk));
        let _ = writeln!(o, "error_tolerance = {}", f(a.tolerance));
        let _ = writeln!(o, "phi_mark = {}", f(a.phi_mark));
        let _ = writeln!(o, "support_factor = {}", f(a.support_factor));
        let _ = writeln!(o, "adapt_every = {}", a.adapt_every);
        let _ = writeln!(o, "\n[output]");
        let _ = writeln!(o, "snapshot_every = {}", self.output.snapshot_every);
        let _ = writeln!(o, "checkpoint_every = {}", self.output.checkpoint_every);
        o
    }
}
