//! Time stepping for u_t + (u_xx + f(u))_x = 0 on the periodic grid.

mod conservation;
mod etdrk4;
mod snapshot;

pub use conservation::{conservation_report, invariants, ConservationReport, Invariants};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SNAPSHOT_VERSION};

pub(crate) use conservation::invariants_with;

use crate::error::{Error, Result};
use crate::grid::{check_finite, Field, State};
use crate::nonlinearity::NonlinearitySpec;
use etdrk4::Integrator;

/// Amplitude growth factor treated as numerical blow-up.
pub const BLOW_UP_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    /// Observers run every `snapshot_stride` steps.
    pub snapshot_stride: usize,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SolverConfig {
            dt,
            t_end,
            dealias: true,
            snapshot_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter("snapshot_stride must be positive".into()));
        }
        Ok(())
    }

    /// Number of steps from `t0` to `t_end`; the interval must be an integer
    /// multiple of dt so that observed times are exact multiples.
    pub fn steps_from(&self, t0: f64) -> Result<usize> {
        self.validate()?;
        let span = self.t_end - t0;
        if span < 0.0 {
            return Err(Error::Precondition(format!(
                "t_end = {} precedes the initial time {t0}",
                self.t_end
            )));
        }
        let steps = (span / self.dt).round();
        if (steps * self.dt - span).abs() > 1e-9 * span.max(1.0) {
            return Err(Error::Precondition(format!(
                "t_end - t0 = {span} is not a multiple of dt = {}",
                self.dt
            )));
        }
        Ok(steps as usize)
    }
}

/// Nonlinear stability bound dt <= 0.5 h / max|u|.
pub fn nonlinear_dt_limit(state: &State) -> f64 {
    let m = state.field.max_abs();
    if m == 0.0 {
        f64::INFINITY
    } else {
        0.5 * state.grid().spacing() / m
    }
}

fn check_dt(state: &State, dt: f64) -> Result<()> {
    let limit = nonlinear_dt_limit(state);
    if dt > limit {
        return Err(Error::Precondition(format!(
            "dt = {dt} exceeds the nonlinear limit 0.5 h / max|u| = {limit} at t = {}",
            state.time
        )));
    }
    Ok(())
}

/// Advances `s` by one step of size `cfg.dt`.
pub fn step(s: &State, spec: &NonlinearitySpec, cfg: &SolverConfig) -> Result<State> {
    cfg.validate()?;
    check_finite(s.values())?;
    let mut integrator = Integrator::new(*s.grid(), spec, cfg.dt, cfg.dealias);
    let mut v = integrator.to_spectrum(s.values());
    integrator.advance(&mut v);
    let mut out = vec![0.0; s.grid().n()];
    integrator.to_values(&v, &mut out);
    let time = s.time + cfg.dt;
    let field = Field::new(*s.grid(), out).map_err(|_| Error::BlowUp {
        time,
        reason: "non-finite value".into(),
    })?;
    let limit = BLOW_UP_FACTOR * s.field.max_abs();
    if field.max_abs() > limit {
        return Err(Error::BlowUp {
            time,
            reason: format!("max|u| = {} exceeds {limit}", field.max_abs()),
        });
    }
    State::new(time, field)
}

/// Callback invoked on every observed state.
pub trait Observer {
    fn observe(&mut self, state: &State) -> Result<()>;
}

impl<F: FnMut(&State) -> Result<()>> Observer for F {
    fn observe(&mut self, state: &State) -> Result<()> {
        self(state)
    }
}

/// Which observed states a trajectory keeps in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Retention {
    All,
    /// Every k-th observed state (the first is always kept).
    Every(usize),
    /// Only the final state.
    None,
}

#[derive(Debug)]
pub struct Failure {
    pub time: f64,
    pub error: Error,
}

#[derive(Debug)]
pub struct Trajectory {
    /// Retained observed states in time order.
    pub snapshots: Vec<State>,
    /// Times of all observed states, retained or not.
    pub observed_times: Vec<f64>,
    /// Last successfully computed state.
    pub final_state: State,
    pub failure: Option<Failure>,
}

impl Trajectory {
    /// Converts a recorded failure into an error.
    pub fn into_result(self) -> Result<Trajectory> {
        match self.failure {
            Some(f) => Err(f.error),
            None => Ok(self),
        }
    }
}

/// Evolves to `cfg.t_end`, keeping every observed state.
pub fn evolve(
    initial: State,
    spec: &NonlinearitySpec,
    cfg: &SolverConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<Trajectory> {
    evolve_with(initial, spec, cfg, observers, Retention::All)
}

/// Evolves to `cfg.t_end`. Configuration problems are returned as errors;
/// failures during the run (blow-up, observer errors) are recorded in
/// [`Trajectory::failure`] together with the states computed so far.
pub fn evolve_with(
    initial: State,
    spec: &NonlinearitySpec,
    cfg: &SolverConfig,
    observers: &mut [&mut dyn Observer],
    retention: Retention,
) -> Result<Trajectory> {
    let steps = cfg.steps_from(initial.time)?;
    check_finite(initial.values())?;
    check_dt(&initial, cfg.dt)?;
    if let Retention::Every(0) = retention {
        return Err(Error::InvalidParameter("retention interval must be positive".into()));
    }

    let grid = *initial.grid();
    let t0 = initial.time;
    let amp0 = initial.field.max_abs();
    let threshold = BLOW_UP_FACTOR * amp0;
    let mut traj = Trajectory {
        snapshots: Vec::new(),
        observed_times: Vec::new(),
        final_state: initial.clone(),
        failure: None,
    };
    let mut observed = 0usize;
    let mut record = |traj: &mut Trajectory, state: &State, observers: &mut [&mut dyn Observer]| {
        for o in observers.iter_mut() {
            o.observe(state)?;
        }
        let keep = match retention {
            Retention::All => true,
            Retention::Every(k) => observed.is_multiple_of(k),
            Retention::None => false,
        };
        if keep {
            traj.snapshots.push(state.clone());
        }
        traj.observed_times.push(state.time);
        observed += 1;
        Ok::<(), Error>(())
    };

    if let Err(error) = record(&mut traj, &initial, observers) {
        traj.failure = Some(Failure { time: t0, error });
        return Ok(traj);
    }
    if steps == 0 {
        return Ok(traj);
    }

    let mut integrator = Integrator::new(grid, spec, cfg.dt, cfg.dealias);
    let mut v = integrator.to_spectrum(initial.values());
    let mut values = vec![0.0; grid.n()];
    for i in 1..=steps {
        integrator.advance(&mut v);
        let time = t0 + i as f64 * cfg.dt;
        let observe = i % cfg.snapshot_stride == 0 || i == steps;
        // the spectral bound is cheap; the exact maximum is only computed
        // when the bound is inconclusive or a state is needed anyway
        let bound = integrator.amplitude_bound(&v);
        if !observe && bound <= threshold {
            continue;
        }
        integrator.to_values(&v, &mut values);
        let state = match blow_up_check(&values, threshold, time) {
            Ok(()) => State::new(time, Field::new(grid, values.clone())?)?,
            Err(error) => {
                traj.failure = Some(Failure { time, error });
                return Ok(traj);
            }
        };
        if !observe {
            continue;
        }
        if let Err(error) = check_dt(&state, cfg.dt).and_then(|_| record(&mut traj, &state, observers)) {
            traj.failure = Some(Failure { time, error });
            traj.final_state = state;
            return Ok(traj);
        }
        traj.final_state = state;
    }
    Ok(traj)
}

fn blow_up_check(values: &[f64], threshold: f64, time: f64) -> Result<()> {
    if let Some(j) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::BlowUp {
            time,
            reason: format!("non-finite value at index {j}"),
        });
    }
    let m = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if m > threshold {
        return Err(Error::BlowUp {
            time,
            reason: format!("max|u| = {m} exceeds {threshold}"),
        });
    }
    Ok(())
}
