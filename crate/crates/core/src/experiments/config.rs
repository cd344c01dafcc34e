//! Experiment configuration files: TOML with flat sections.
//!
//! ```toml
//! [scenario]
//! kind = "gaussian_small"   # see ScenarioKind
//! amplitude = 0.05
//!
//! [equation]
//! model = "kdv"             # kdv | mkdv | gardner | custom
//!
//! [grid]
//! half_length = 400.0
//! n = 8192
//!
//! [solver]
//! dt = 5e-4
//! t_end = 200.0
//! snapshot_stride = 100
//!
//! [diagnostics]
//! window_c = 1.0
//!
//! [output]
//! snapshot_every = 10
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nonlinearity::{Monomial, NonlinearitySpec};
use crate::solver::SolverConfig;
use crate::virial::{ScalingLaw, VirialSettings};

/// H1 norm of the unit Gaussian exp(-x^2), sqrt(2) (pi/2)^(1/4); small-data
/// thresholds are expressed relative to it.
pub fn gaussian_norm_scale() -> f64 {
    std::f64::consts::SQRT_2 * std::f64::consts::FRAC_PI_2.powf(0.25)
}

/// Default smallness threshold: the H1 norm of a Gaussian of amplitude 0.2.
pub fn default_epsilon() -> f64 {
    0.2 * gaussian_norm_scale()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    GaussianSmall,
    KdvSoliton,
    KdvTwoSolitons,
    MkdvStandingBreather,
    GardnerBreather,
    GardnerGaussian,
    CustomSnapshot,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::GaussianSmall => "gaussian_small",
            ScenarioKind::KdvSoliton => "kdv_soliton",
            ScenarioKind::KdvTwoSolitons => "kdv_two_solitons",
            ScenarioKind::MkdvStandingBreather => "mkdv_standing_breather",
            ScenarioKind::GardnerBreather => "gardner_breather",
            ScenarioKind::GardnerGaussian => "gardner_gaussian",
            ScenarioKind::CustomSnapshot => "custom_snapshot",
        }
    }

    /// Scenarios whose data disperse into radiation, for which the box must
    /// contain every resolved wave packet until t_end.
    pub fn radiates(self) -> bool {
        matches!(
            self,
            ScenarioKind::GaussianSmall | ScenarioKind::GardnerGaussian | ScenarioKind::CustomSnapshot
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub kind: ScenarioKind,
    /// Gaussian amplitude a in a exp(-x^2).
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// Soliton speed (kdv_soliton) or first soliton speed.
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "default_c2")]
    pub c2: f64,
    #[serde(default = "default_x2")]
    pub x2: f64,
    /// Breather parameters.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Gardner breather beta; standing breathers use sqrt(3) alpha.
    #[serde(default)]
    pub beta: Option<f64>,
    /// Snapshot file for custom_snapshot, relative to the config file.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Kdv,
    Mkdv,
    Gardner,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSection {
    pub model: Model,
    /// Gardner coefficient of u^3.
    #[serde(default = "one")]
    pub mu: f64,
    /// Custom models: leading power and f1 monomials as parallel arrays.
    #[serde(default)]
    pub p: Option<u32>,
    #[serde(default)]
    pub f1_degrees: Vec<u32>,
    #[serde(default)]
    pub f1_coeffs: Vec<f64>,
}

impl EquationSection {
    pub fn spec(&self) -> Result<NonlinearitySpec> {
        match self.model {
            Model::Kdv => Ok(NonlinearitySpec::kdv()),
            Model::Mkdv => Ok(NonlinearitySpec::mkdv()),
            Model::Gardner => NonlinearitySpec::gardner(self.mu),
            Model::Custom => {
                let p = self
                    .p
                    .ok_or_else(|| Error::Config("custom model needs equation.p".into()))?;
                if self.f1_degrees.len() != self.f1_coeffs.len() {
                    return Err(Error::Config(
                        "equation.f1_degrees and equation.f1_coeffs differ in length".into(),
                    ));
                }
                let f1 = self
                    .f1_degrees
                    .iter()
                    .zip(&self.f1_coeffs)
                    .map(|(&degree, &coeff)| Monomial { degree, coeff })
                    .collect();
                NonlinearitySpec::new(p, f1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_length: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default = "one_usize")]
    pub snapshot_stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    Dynamic,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    #[serde(default = "one")]
    pub window_c: f64,
    /// Rate of the exp(-c0 |x|) weight.
    #[serde(default = "one")]
    pub c0: f64,
    #[serde(default = "default_scaling")]
    pub scaling: ScalingMode,
    /// lambda for constant scaling.
    #[serde(default = "one")]
    pub scaling_c0: f64,
    /// Smallness threshold on sup_t |u(t)|_H1.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Whether exceeding epsilon fails the run. Defaults to true for the
    /// dispersive scenarios and false for the coherent-structure controls.
    #[serde(default)]
    pub require_small: Option<bool>,
    /// Speed v of the soliton-region diagnostic on x > v t.
    #[serde(default = "default_v")]
    pub soliton_region_v: f64,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection {
            window_c: 1.0,
            c0: 1.0,
            scaling: ScalingMode::Dynamic,
            scaling_c0: 1.0,
            epsilon: default_epsilon(),
            require_small: None,
            soliton_region_v: default_v(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Write every k-th observed state to snapshots/.
    #[serde(default = "one_usize")]
    pub snapshot_every: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { snapshot_every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSection,
    pub equation: EquationSection,
    pub grid: GridSection,
    pub solver: SolverSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn default_amplitude() -> f64 {
    0.05
}
fn default_c2() -> f64 {
    0.5
}
fn default_x2() -> f64 {
    -50.0
}
fn default_alpha() -> f64 {
    0.3
}
fn default_v() -> f64 {
    0.05
}
fn default_scaling() -> ScalingMode {
    ScalingMode::Dynamic
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.spec()?;
        self.virial_settings()?;
        let d = &self.diagnostics;
        for (name, v) in [
            ("diagnostics.window_c", d.window_c),
            ("diagnostics.c0", d.c0),
            ("diagnostics.epsilon", d.epsilon),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(d.soliton_region_v.is_finite() && d.soliton_region_v >= 0.0) {
            return Err(Error::Config("diagnostics.soliton_region_v must be >= 0".into()));
        }
        if self.output.snapshot_every == 0 {
            return Err(Error::Config("output.snapshot_every must be positive".into()));
        }
        let s = &self.solver;
        SolverConfig {
            dt: s.dt,
            t_end: s.t_end,
            dealias: s.dealias,
            snapshot_stride: s.snapshot_stride,
        }
        .steps_from(0.0)
        .map(|_| ())
        .or_else(|e| match e {
            // the initial time of custom snapshots is only known later
            Error::Precondition(_) if self.scenario.kind == ScenarioKind::CustomSnapshot => Ok(()),
            other => Err(other),
        })
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.half_length, self.grid.n)
    }

    pub fn spec(&self) -> Result<NonlinearitySpec> {
        self.equation.spec()
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dt: self.solver.dt,
            t_end: self.solver.t_end,
            dealias: self.solver.dealias,
            snapshot_stride: self.solver.snapshot_stride,
        }
    }

    pub fn virial_settings(&self) -> Result<VirialSettings> {
        let d = &self.diagnostics;
        let law = match d.scaling {
            ScalingMode::Dynamic => ScalingLaw::Dynamic,
            ScalingMode::Constant => {
                if !(d.scaling_c0.is_finite() && d.scaling_c0 > 0.0) {
                    return Err(Error::Config("diagnostics.scaling_c0 must be positive".into()));
                }
                ScalingLaw::Constant(d.scaling_c0)
            }
        };
        Ok(VirialSettings {
            spec: self.spec()?,
            law,
            window_c: d.window_c,
            kato_c0: d.c0,
        })
    }

    pub fn require_small(&self) -> bool {
        self.diagnostics
            .require_small
            .unwrap_or_else(|| self.scenario.kind.radiates())
    }

    /// Snapshot path resolved against the config's directory.
    pub fn snapshot_path(&self) -> Option<PathBuf> {
        let p = self.scenario.path.as_ref()?;
        Some(match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.clone(),
        })
    }
}
