use crate::error::{Error, Result};
use crate::exact::{ClosedForm, GardnerBreatherParams, MkdvBreatherParams, SolitonParams};
use crate::grid::{Field, State};
use crate::solver::read_snapshot;

use super::config::{ExperimentConfig, Model, ScenarioKind};

/// Largest Gaussian amplitude treated as small data.
pub const SMALL_AMPLITUDE: f64 = 0.2;

/// Minimum distance between the two solitons of kdv_two_solitons.
pub const MIN_SEPARATION: f64 = 40.0;

#[derive(Debug, Clone)]
pub struct Initial {
    pub state: State,
    pub warnings: Vec<String>,
}

fn require_model(cfg: &ExperimentConfig, model: Model) -> Result<()> {
    if cfg.equation.model != model {
        return Err(Error::Precondition(format!(
            "scenario {} needs equation.model = {:?}, got {:?}",
            cfg.scenario.kind.name(),
            model,
            cfg.equation.model
        )));
    }
    Ok(())
}

pub fn build_initial(cfg: &ExperimentConfig) -> Result<Initial> {
    let grid = cfg.grid()?;
    let sc = &cfg.scenario;
    let mut warnings = Vec::new();
    let field = match sc.kind {
        ScenarioKind::GaussianSmall | ScenarioKind::GardnerGaussian => {
            if sc.kind == ScenarioKind::GardnerGaussian {
                require_model(cfg, Model::Gardner)?;
            }
            let a = sc.amplitude;
            if !a.is_finite() {
                return Err(Error::Config("scenario.amplitude must be finite".into()));
            }
            if a.abs() > SMALL_AMPLITUDE {
                warnings.push(format!(
                    "WARNING: amplitude {a} exceeds {SMALL_AMPLITUDE}; the data are outside the \
                     small-data regime and decay is not expected to be observable"
                ));
            }
            grid.sample(|x| a * (-(x - sc.x0) * (x - sc.x0)).exp())?
        }
        ScenarioKind::KdvSoliton => {
            let spec = cfg.spec()?;
            if !spec.f1().is_empty() {
                return Err(Error::Precondition(
                    "closed-form solitons need a pure power nonlinearity".into(),
                ));
            }
            SolitonParams::new(sc.c, spec.p(), sc.x0)?.evaluate(0.0, &grid)?
        }
        ScenarioKind::KdvTwoSolitons => {
            require_model(cfg, Model::Kdv)?;
            if (sc.x0 - sc.x2).abs() < MIN_SEPARATION {
                return Err(Error::Precondition(format!(
                    "solitons at {} and {} are closer than {MIN_SEPARATION}",
                    sc.x0, sc.x2
                )));
            }
            let a = SolitonParams::new(sc.c, 2, sc.x0)?.evaluate(0.0, &grid)?;
            let b = SolitonParams::new(sc.c2, 2, sc.x2)?.evaluate(0.0, &grid)?;
            let sum = a.values().iter().zip(b.values()).map(|(u, v)| u + v).collect();
            Field::new(grid, sum)?
        }
        ScenarioKind::MkdvStandingBreather => {
            require_model(cfg, Model::Mkdv)?;
            let beta = 3f64.sqrt() * sc.alpha;
            MkdvBreatherParams::centered_at(sc.alpha, beta, sc.x0)?.evaluate(0.0, &grid)?
        }
        ScenarioKind::GardnerBreather => {
            require_model(cfg, Model::Gardner)?;
            let beta = sc.beta.unwrap_or(sc.alpha);
            GardnerBreatherParams::centered_at(sc.alpha, beta, cfg.equation.mu, sc.x0)?
                .evaluate(0.0, &grid)?
        }
        ScenarioKind::CustomSnapshot => {
            let path = cfg
                .snapshot_path()
                .ok_or_else(|| Error::Config("custom_snapshot needs scenario.path".into()))?;
            let state = read_snapshot(&path)?;
            if *state.grid() != grid {
                return Err(Error::Precondition(format!(
                    "snapshot grid (L = {}, n = {}) differs from the configured grid (L = {}, n = {})",
                    state.grid().half_length(),
                    state.grid().n(),
                    grid.half_length(),
                    grid.n()
                )));
            }
            return Ok(Initial { state, warnings });
        }
    };
    Ok(Initial {
        state: State::new(0.0, field)?,
        warnings,
    })
}
