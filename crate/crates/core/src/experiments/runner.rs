use crate::error::{Error, Result};
use crate::exact::GardnerBreatherParams;
use crate::grid::State;
use crate::solver::{evolve_with, ConservationReport, Failure, Invariants, Retention, Trajectory};
use crate::spectral;
use crate::virial::{lambda_eval, ScalingLaw, VirialRow, VirialSeries};

use super::config::{ExperimentConfig, ScenarioKind};
use super::scenario::{build_initial, Initial};

/// Boundary amplitude above which a snapshot counts as contaminated by
/// wrap-around through the periodic seam.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Relative spectral level below which Fourier modes of the initial data
/// are treated as absent when sizing the box. For small data, a mode at this
/// level disperses to an amplitude of order 1e-10 or less by the time it
/// reaches the seam.
const SPECTRAL_FLOOR: f64 = 1e-7;

/// Relative level defining the initial support.
const SUPPORT_FLOOR: f64 = 1e-10;

/// Time used as the reference for the decay trend ratios.
pub const TREND_REFERENCE_TIME: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SizingReport {
    pub lines: Vec<String>,
    pub ok: bool,
}

impl SizingReport {
    fn check(&mut self, ok: bool, line: String) {
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
        self.ok &= ok;
    }
}

/// Largest angular wavenumber carrying content above `SPECTRAL_FLOOR`
/// relative to the spectral peak.
pub fn effective_wavenumber(state: &State) -> f64 {
    let g = state.grid();
    let spec = spectral::plans(g.n()).forward_vec(state.values());
    let peak = spec.iter().fold(0.0, |m: f64, c| m.max(c.norm()));
    if peak == 0.0 {
        return 0.0;
    }
    let last = spec
        .iter()
        .rposition(|c| c.norm() >= SPECTRAL_FLOOR * peak)
        .unwrap_or(0);
    std::f64::consts::PI * last as f64 / g.half_length()
}

/// Radius of the region where |u0| exceeds `SUPPORT_FLOOR` times its max.
fn support_radius(state: &State) -> f64 {
    let m = state.field.max_abs();
    state
        .grid()
        .points()
        .zip(state.values())
        .filter(|(_, v)| v.abs() >= SUPPORT_FLOOR * m)
        .fold(0.0, |r: f64, (x, _)| r.max(x.abs()))
}

/// Checks that the box is large enough for the configured run.
pub fn sizing_report(cfg: &ExperimentConfig, initial: &State) -> Result<SizingReport> {
    let grid = cfg.grid()?;
    let l = grid.half_length();
    let span = cfg.solver.t_end - initial.time;
    let mut r = SizingReport {
        lines: Vec::new(),
        ok: true,
    };

    if let (ScalingLaw::Dynamic, true) = (cfg.virial_settings()?.law, cfg.solver.t_end >= 2.0) {
        let lam = lambda_eval(ScalingLaw::Dynamic, cfg.solver.t_end)?.lambda;
        r.check(
            lam <= l / 10.0,
            format!("lambda(t_end) = {lam:.4} <= L/10 = {:.4}", l / 10.0),
        );
    }

    let sc = &cfg.scenario;
    let speed = match sc.kind {
        ScenarioKind::KdvSoliton => Some(sc.c),
        ScenarioKind::KdvTwoSolitons => Some(sc.c.max(sc.c2)),
        ScenarioKind::GardnerBreather => {
            let beta = sc.beta.unwrap_or(sc.alpha);
            Some(GardnerBreatherParams::new(sc.alpha, beta, cfg.equation.mu)?.gamma().abs())
        }
        _ => None,
    };
    if let Some(c) = speed {
        r.check(
            c * span <= l / 2.0,
            format!("c_max * t_end = {:.4} <= L/2 = {:.4}", c * span, l / 2.0),
        );
    }

    if sc.kind.radiates() {
        // linear waves of wavenumber k travel at group speed 3k^2; no
        // resolved packet may reach the seam before t_end
        let k = effective_wavenumber(initial).min(grid.max_wavenumber());
        let reach = 3.0 * k * k * span + support_radius(initial);
        r.check(
            reach <= l,
            format!("radiation reach 3 K^2 t + R0 = {reach:.1} <= L = {l} (K = {k:.3})"),
        );
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub sup_h1: f64,
    pub sup_l1: f64,
    pub epsilon: f64,
    pub below_eps: bool,
    pub require_small: bool,
    pub boundary_max: f64,
    pub boundary_ok: bool,
    pub max_drift_mass: f64,
    pub max_drift_l2: f64,
    pub max_drift_energy: f64,
    /// win_h1 and win_l2 at the final time over their values at t = 10.
    pub trend_win_h1: f64,
    pub trend_win_l2: f64,
    pub failure: Option<String>,
    pub blow_up: bool,
}

impl RunSummary {
    /// 0 on success, 2 if the smallness hypothesis is required and fails,
    /// 3 on blow-up.
    pub fn exit_code(&self) -> i32 {
        if self.blow_up {
            3
        } else if self.failure.is_some() || (self.require_small && !self.below_eps) {
            2
        } else {
            0
        }
    }
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub initial: State,
    /// Observed states kept for the snapshot files.
    pub trajectory: Trajectory,
    pub rows: Vec<VirialRow>,
    pub conservation: Vec<ConservationReport>,
    /// (t, H1 norm on x > v t)
    pub soliton_region: Vec<(f64, f64)>,
    pub summary: RunSummary,
    pub warnings: Vec<String>,
    pub sizing: SizingReport,
}

/// Builds the initial state, checks sizing, evolves with all diagnostics
/// attached. Configuration and sizing problems are errors; failures during
/// the run are recorded in the summary.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let Initial { state, warnings } = build_initial(cfg)?;
    let sizing = sizing_report(cfg, &state)?;
    if !sizing.ok {
        return Err(Error::Precondition(format!(
            "grid too small for this run:\n  {}",
            sizing.lines.join("\n  ")
        )));
    }

    let spec = cfg.spec()?;
    let mut series = VirialSeries::new(cfg.virial_settings()?);
    let v = cfg.diagnostics.soliton_region_v;
    let mut region = Vec::new();
    let mut region_obs = |s: &State| {
        region.push((s.time, soliton_region_h1(s, v)));
        Ok(())
    };
    let trajectory = evolve_with(
        state.clone(),
        &spec,
        &cfg.solver_config(),
        &mut [&mut series, &mut region_obs],
        Retention::Every(cfg.output.snapshot_every),
    )?;
    let rows = series.into_rows();
    let conservation = conservation_from_rows(&rows);
    let summary = summarize(cfg, &rows, &conservation, trajectory.failure.as_ref());
    Ok(ExperimentOutput {
        config: cfg.clone(),
        initial: state,
        trajectory,
        rows,
        conservation,
        soliton_region: region,
        summary,
        warnings,
        sizing,
    })
}

/// H1 norm of u restricted to x > v t.
pub fn soliton_region_h1(s: &State, v: f64) -> f64 {
    let g = s.grid();
    let ux = &spectral::derivatives(s.values(), g.half_length(), &[1])[0];
    let cut = v * s.time;
    let sum: f64 = g
        .points()
        .zip(s.values().iter().zip(ux))
        .filter(|(x, _)| *x > cut)
        .map(|(_, (u, d))| u * u + d * d)
        .sum();
    (g.spacing() * sum).sqrt()
}

pub(crate) fn conservation_from_rows(rows: &[VirialRow]) -> Vec<ConservationReport> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let inv = |r: &VirialRow| Invariants {
        mass: r.mass,
        l2: r.l2,
        energy: r.energy,
    };
    let initial = inv(first);
    rows.iter()
        .map(|r| ConservationReport::from_invariants(r.t, &initial, &inv(r)))
        .collect()
}

fn trend(rows: &[VirialRow], get: impl Fn(&VirialRow) -> f64) -> f64 {
    let (Some(last), Some(reference)) = (
        rows.last(),
        rows.iter()
            .filter(|r| get(r).is_finite())
            .min_by(|a, b| {
                let da = (a.t - TREND_REFERENCE_TIME).abs();
                let db = (b.t - TREND_REFERENCE_TIME).abs();
                da.total_cmp(&db)
            }),
    ) else {
        return f64::NAN;
    };
    if last.t <= reference.t || (reference.t - TREND_REFERENCE_TIME).abs() > 1.0 {
        return f64::NAN;
    }
    get(last) / get(reference)
}

pub(crate) fn summarize(
    cfg: &ExperimentConfig,
    rows: &[VirialRow],
    conservation: &[ConservationReport],
    failure: Option<&Failure>,
) -> RunSummary {
    let sup = |get: fn(&VirialRow) -> f64| rows.iter().map(get).fold(0.0, f64::max);
    let max_abs = |get: fn(&ConservationReport) -> f64| {
        conservation.iter().map(|c| get(c).abs()).fold(0.0, f64::max)
    };
    let sup_h1 = sup(|r| r.h1);
    let boundary_max = sup(|r| r.boundary);
    let eps = cfg.diagnostics.epsilon;
    RunSummary {
        sup_h1,
        sup_l1: sup(|r| r.l1),
        epsilon: eps,
        below_eps: sup_h1 < eps,
        require_small: cfg.require_small(),
        boundary_max,
        boundary_ok: boundary_max <= BOUNDARY_TOLERANCE,
        max_drift_mass: max_abs(|c| c.drift_mass),
        max_drift_l2: max_abs(|c| c.drift_l2),
        max_drift_energy: max_abs(|c| c.drift_energy),
        trend_win_h1: trend(rows, |r| r.win_h1),
        trend_win_l2: trend(rows, |r| r.win_l2),
        failure: failure.map(|f| format!("t = {}: {}", f.time, f.error)),
        blow_up: matches!(failure.map(|f| &f.error), Some(Error::BlowUp { .. })),
    }
}
