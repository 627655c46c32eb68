//! Experiment configuration, read from TOML with unknown keys rejected.
//!
//! ```toml
//! seed = 0
//!
//! [task]
//! kind = "probe"
//! order = 1
//!
//! [function]
//! name = "pole"
//! w = [0.0, -2.0]
//!
//! [domain]
//! shape = "upper-half-plane"
//!
//! [probe]
//! coarse_grid = 48
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use holonorm::geometry::{DomainSpec, HalfPlane, Halfline, HPoly};
use holonorm::{FunctionHandle, Kind, ProbeConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

fn default_tol() -> f64 {
    1e-9
}

fn default_slack() -> f64 {
    holonorm::favard::DEFAULT_SLACK
}

fn default_samples() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Favard {
        n: u32,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    LkTable {
        n_max: u32,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    VerifyLk {
        alpha1: u32,
        order: u32,
        alpha2: u32,
        #[serde(default = "default_slack")]
        slack: f64,
    },
    Recession {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<Complex64>,
        /// Random base points for the membership sweep.
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Probe {
        order: u32,
    },
    Witness {
        order: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<f64>,
    },
    Membership {
        orders: Vec<u32>,
    },
    ChainBound {
        order: u32,
        alpha: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z_o: Option<Complex64>,
    },
    Thm42 {
        orders: Vec<u32>,
    },
    Thm47 {
        orders: Vec<u32>,
    },
    Primitive {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Complex64>,
        z: Complex64,
    },
}

impl Task {
    /// Subcommand name of the task.
    pub fn name(&self) -> &'static str {
        match self {
            Task::Favard { .. } => "favard",
            Task::LkTable { .. } => "lk-table",
            Task::VerifyLk { .. } => "verify-lk",
            Task::Recession { .. } => "recession",
            Task::Probe { .. } => "probe",
            Task::Witness { .. } => "witness",
            Task::Membership { .. } => "membership",
            Task::ChainBound { .. } => "chain-bound",
            Task::Thm42 { .. } => "thm42",
            Task::Thm47 { .. } => "thm47",
            Task::Primitive { .. } => "primitive",
        }
    }

    fn needs_function(&self) -> bool {
        !matches!(self, Task::Favard { .. } | Task::LkTable { .. } | Task::Recession { .. })
    }

    fn needs_domain(&self) -> bool {
        !matches!(self, Task::Favard { .. } | Task::LkTable { .. })
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub normal: Complex64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalflineConfig {
    pub base: Complex64,
    pub direction: Complex64,
    pub overshoot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainConfig {
    UnitDisc,
    UpperHalfPlane,
    Quadrant,
    UnitSquare,
    Plane,
    RealLine,
    Strip { lower: f64, upper: f64 },
    Disc { center: Complex64, radius: f64 },
    DiscExterior { center: Complex64, radius: f64 },
    Hpoly { constraints: Vec<ConstraintConfig> },
    Halflines { lines: Vec<HalflineConfig> },
}

impl DomainConfig {
    pub fn build(&self) -> holonorm::Result<DomainSpec> {
        Ok(match self {
            DomainConfig::UnitDisc => DomainSpec::unit_disc(),
            DomainConfig::UpperHalfPlane => DomainSpec::upper_half_plane(),
            DomainConfig::Quadrant => DomainSpec::quadrant(),
            DomainConfig::UnitSquare => DomainSpec::unit_square(),
            DomainConfig::Plane => DomainSpec::Plane,
            DomainConfig::RealLine => DomainSpec::real_line_family(),
            DomainConfig::Strip { lower, upper } => DomainSpec::strip(*lower, *upper)?,
            DomainConfig::Disc { center, radius } => DomainSpec::disc(*center, *radius)?,
            DomainConfig::DiscExterior { center, radius } => DomainSpec::disc_exterior(*center, *radius)?,
            DomainConfig::Hpoly { constraints } => {
                let planes = constraints
                    .iter()
                    .map(|c| HalfPlane::new(c.normal, c.offset))
                    .collect::<holonorm::Result<Vec<_>>>()?;
                DomainSpec::HPoly(HPoly::new(planes)?)
            }
            DomainConfig::Halflines { lines } => DomainSpec::halflines(
                lines
                    .iter()
                    .map(|l| Halfline::new(l.base, l.direction, l.overshoot))
                    .collect::<holonorm::Result<Vec<_>>>()?,
            )?,
        })
    }
}

/// A config with its function and domain built and checked.
pub struct Prepared {
    pub config: ExperimentConfig,
    pub function: Option<FunctionHandle>,
    pub domain: Option<DomainSpec>,
}

fn field<T>(name: &str, r: holonorm::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("{name}: {e}")))
}

fn check_finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name}: must be a finite number")))
    }
}

fn check_finite_complex(name: &str, z: &Complex64) -> Result<(), CliError> {
    check_finite(name, z.re)?;
    check_finite(name, z.im)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Check required sections and numeric ranges, and build the function
    /// and domain.
    pub fn prepare(self) -> Result<Prepared, CliError> {
        match &self.task {
            Task::Favard { tol, .. } | Task::LkTable { tol, .. } => {
                check_finite("task.tol", *tol)?;
                if *tol <= 0.0 {
                    return Err(CliError::Config("task.tol: must be positive".into()));
                }
            }
            Task::VerifyLk { slack, .. } => check_finite("task.slack", *slack)?,
            Task::Recession { point: Some(p), .. } => check_finite_complex("task.point", p)?,
            Task::Witness { threshold: Some(t), .. } => {
                check_finite("task.threshold", *t)?;
                if *t <= 0.0 {
                    return Err(CliError::Config("task.threshold: must be positive".into()));
                }
            }
            Task::ChainBound { z_o: Some(z), .. } => check_finite_complex("task.z_o", z)?,
            Task::Primitive { base, z } => {
                check_finite_complex("task.z", z)?;
                if let Some(b) = base {
                    check_finite_complex("task.base", b)?;
                }
            }
            Task::Membership { orders } | Task::Thm42 { orders } | Task::Thm47 { orders } if orders.is_empty() => {
                return Err(CliError::Config("task.orders: must be non-empty".into()));
            }
            _ => {}
        }
        field("probe", self.probe.validate())?;
        let function = match (&self.function, self.task.needs_function()) {
            (Some(kind), _) => Some(field("function", FunctionHandle::make(kind.clone()))?),
            (None, true) => return Err(CliError::Config(format!("task {}: missing [function] section", self.task))),
            (None, false) => None,
        };
        let domain = match (&self.domain, self.task.needs_domain()) {
            (Some(d), _) => Some(field("domain", d.build())?),
            (None, true) => return Err(CliError::Config(format!("task {}: missing [domain] section", self.task))),
            (None, false) => None,
        };
        Ok(Prepared {
            config: self,
            function,
            domain,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_function_and_domain() {
        let cfg = ExperimentConfig::parse(
            r#"
            [task]
            kind = "thm42"
            orders = [0, 2]

            [function]
            name = "sum"
            terms = [{ name = "pole", w = [0.0, -1.0] }, { name = "directional-exp", theta = -1.5707963267948966 }]

            [domain]
            shape = "strip"
            lower = 0.0
            upper = 1.0
            "#,
        )
        .unwrap();
        let p = cfg.prepare().unwrap();
        assert!(p.function.is_some());
        assert!(matches!(p.domain, Some(DomainSpec::HPoly(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::parse(
            r#"
            [task]
            kind = "favard"
            n = 1
            tolerance = 1e-9
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("tolerance"), "{err}");

        let err = ExperimentConfig::parse(
            r#"
            [task]
            kind = "probe"
            order = 0
            [function]
            name = "pole"
            w = [0.0, 1.0]
            colour = "red"
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn missing_sections_and_bad_numbers() {
        let cfg = ExperimentConfig::parse("[task]\nkind = \"probe\"\norder = 0\n").unwrap();
        assert!(matches!(cfg.prepare(), Err(CliError::Config(m)) if m.contains("[function]")));

        let cfg = ExperimentConfig::parse("[task]\nkind = \"favard\"\nn = 0\ntol = nan\n").unwrap();
        assert!(matches!(cfg.prepare(), Err(CliError::Config(m)) if m.contains("finite")));

        let cfg = ExperimentConfig::parse(
            "[task]\nkind = \"recession\"\n[domain]\nshape = \"disc\"\ncenter = [0.0, 0.0]\nradius = -1.0\n",
        )
        .unwrap();
        assert!(matches!(cfg.prepare(), Err(CliError::Config(m)) if m.starts_with("domain")));

        let err = ExperimentConfig::parse("[task]\nkind = \"probe\"\n").unwrap_err();
        assert!(err.to_string().contains("order"), "{err}");
    }
}
