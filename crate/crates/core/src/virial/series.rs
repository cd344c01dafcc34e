use crate::error::Result;
use crate::grid::{window_norms_with, State};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{invariants_with, Observer};

use super::functionals::{refinement, PreparedState};
use super::scaling::{lambda_eval, window_interval, ScalingLaw};
use super::weights::WeightProfile;

pub const PSI_I: WeightProfile = WeightProfile::Tanh(1);
pub const PHI_J: WeightProfile = WeightProfile::Tanh(2);
pub const PHI_J_LOCAL: WeightProfile = WeightProfile::Sech(6);
pub const PHI_K: WeightProfile = WeightProfile::Tanh(3);
pub const PHI_K_LOCAL: WeightProfile = WeightProfile::Sech(8);

/// Every profile a row evaluates, including the sech^2 family of the
/// decay integrands.
const ROW_PROFILES: [WeightProfile; 6] = [
    PSI_I,
    PHI_J,
    PHI_J_LOCAL,
    PHI_K,
    PHI_K_LOCAL,
    WeightProfile::Sech(2),
];

/// Fraction of the box, at each end, whose maximum is reported as the
/// boundary amplitude.
const BOUNDARY_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct VirialSettings {
    pub spec: NonlinearitySpec,
    pub law: ScalingLaw,
    /// Window constant C in (-C sqrt(t)/ln t, C sqrt(t)/ln t).
    pub window_c: f64,
    /// Decay rate of the exp(-c0 |x|) weight.
    pub kato_c0: f64,
}

impl VirialSettings {
    pub fn new(spec: NonlinearitySpec) -> Self {
        VirialSettings {
            spec,
            law: ScalingLaw::Dynamic,
            window_c: 1.0,
            kato_c0: 1.0,
        }
    }
}

/// Diagnostics at one observed time. Quantities that are undefined at that
/// time (lambda before t = 2, finite differences at the ends) are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VirialRow {
    pub t: f64,
    pub i: f64,
    pub di_fd: f64,
    pub di_rhs: f64,
    pub j_tanh2: f64,
    pub dj_fd: f64,
    pub dj_rhs: f64,
    pub j_sech6: f64,
    pub k_tanh3: f64,
    pub dk_fd: f64,
    pub dk_rhs: f64,
    pub k_sech8: f64,
    pub i2: f64,
    pub i3: f64,
    pub i9: f64,
    pub kato: f64,
    pub cum_i2: f64,
    pub cum_i3: f64,
    pub cum_i9: f64,
    pub cum_kato: f64,
    pub win_a: f64,
    pub win_b: f64,
    pub win_clipped: bool,
    pub win_l2: f64,
    pub win_h1: f64,
    pub mass: f64,
    pub l2: f64,
    pub energy: f64,
    pub lambda_valid: bool,
    /// sup-norm, L1 and H1 norms of the whole state
    pub linf: f64,
    pub l1: f64,
    pub h1: f64,
    /// max |u| over the outer 5% of the box at each end
    pub boundary: f64,
}

/// Accumulates [`VirialRow`]s along a trajectory; usable as an
/// [`Observer`]. Central differences and trapezoid cumulatives are filled
/// in as rows arrive.
#[derive(Debug, Clone)]
pub struct VirialSeries {
    settings: VirialSettings,
    rows: Vec<VirialRow>,
}

impl VirialSeries {
    pub fn new(settings: VirialSettings) -> Self {
        VirialSeries {
            settings,
            rows: Vec::new(),
        }
    }

    pub fn settings(&self) -> &VirialSettings {
        &self.settings
    }

    pub fn rows(&self) -> &[VirialRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<VirialRow> {
        self.rows
    }

    pub fn push(&mut self, state: &State) -> Result<()> {
        let row = self.evaluate(state)?;
        self.rows.push(row);
        let n = self.rows.len();
        if n >= 2 {
            let (prev, cur) = (self.rows[n - 2], &mut self.rows[n - 1]);
            let trap = |c: f64, a: f64, b: f64| {
                if !b.is_finite() {
                    f64::NAN
                } else if c.is_finite() && a.is_finite() {
                    c + 0.5 * (cur.t - prev.t) * (a + b)
                } else {
                    0.0
                }
            };
            cur.cum_i2 = trap(prev.cum_i2, prev.i2, cur.i2);
            cur.cum_i3 = trap(prev.cum_i3, prev.i3, cur.i3);
            cur.cum_i9 = trap(prev.cum_i9, prev.i9, cur.i9);
            cur.cum_kato = trap(prev.cum_kato, prev.kato, cur.kato);
        }
        if n >= 3 {
            let (a, b) = (self.rows[n - 3], self.rows[n - 1]);
            let dt = b.t - a.t;
            let mid = &mut self.rows[n - 2];
            mid.di_fd = (b.i - a.i) / dt;
            mid.dj_fd = (b.j_tanh2 - a.j_tanh2) / dt;
            mid.dk_fd = (b.k_tanh3 - a.k_tanh3) / dt;
        }
        Ok(())
    }

    fn evaluate(&self, state: &State) -> Result<VirialRow> {
        let cfg = &self.settings;
        let grid = state.grid();
        let t = state.time;
        let h = grid.spacing();
        let scaling = lambda_eval(cfg.law, t);
        let refine = scaling
            .as_ref()
            .map_or(1, |sc| refinement(h, sc.lambda, &ROW_PROFILES));
        let prep = PreparedState::refined(state, &cfg.spec, refine);
        let u = state.values();
        let inv = invariants_with(u, prep.ux(), h, &cfg.spec);

        let nan = f64::NAN;
        let mut row = VirialRow {
            t,
            i: nan,
            di_fd: nan,
            di_rhs: nan,
            j_tanh2: nan,
            dj_fd: nan,
            dj_rhs: nan,
            j_sech6: nan,
            k_tanh3: nan,
            dk_fd: nan,
            dk_rhs: nan,
            k_sech8: nan,
            i2: nan,
            i3: nan,
            i9: nan,
            kato: nan,
            cum_i2: nan,
            cum_i3: nan,
            cum_i9: nan,
            cum_kato: nan,
            win_a: nan,
            win_b: nan,
            win_clipped: false,
            win_l2: nan,
            win_h1: nan,
            mass: inv.mass,
            l2: inv.l2,
            energy: inv.energy,
            lambda_valid: false,
            linf: state.field.max_abs(),
            l1: h * u.iter().map(|v| v.abs()).sum::<f64>(),
            h1: (inv.l2 + h * prep.ux().iter().map(|d| d * d).sum::<f64>()).sqrt(),
            boundary: boundary_amplitude(state),
        };

        if let Ok(sc) = scaling {
            row.lambda_valid = sc.lambda <= grid.half_length() / 10.0;
            row.i = prep.functional_i(PSI_I, &sc);
            row.di_rhs = prep.di_dt_rhs(PSI_I, &sc);
            row.j_tanh2 = prep.functional_j(PHI_J, &sc);
            row.dj_rhs = prep.dj_dt_rhs(PHI_J, &sc);
            row.j_sech6 = prep.functional_j(PHI_J_LOCAL, &sc);
            row.k_tanh3 = prep.functional_k(PHI_K, &sc);
            row.dk_rhs = prep.dk_dt_rhs(PHI_K, &sc);
            row.k_sech8 = prep.functional_k(PHI_K_LOCAL, &sc);
            let d = prep.decay_integrands(&sc, cfg.kato_c0);
            row.i2 = d.i2;
            row.i3 = d.i3;
            row.i9 = d.i9;
            row.kato = d.kato;
        } else {
            // the exp(-c0|x|) weight does not involve lambda
            let k = cfg.kato_c0;
            row.kato = h * grid
                .points()
                .enumerate()
                .map(|(j, x)| {
                    let (v, vx, vxx) = (u[j], prep.ux()[j], prep.uxx()[j]);
                    (-k * x.abs()).exp() * (v * v + vx * vx + vxx * vxx)
                })
                .sum::<f64>();
        }
        if self.rows.is_empty() {
            row.cum_kato = 0.0;
            if row.i2.is_finite() {
                row.cum_i2 = 0.0;
                row.cum_i3 = 0.0;
                row.cum_i9 = 0.0;
            }
        }

        if let Ok(w) = window_interval(t, cfg.window_c, Some(grid)) {
            row.win_a = w.a;
            row.win_b = w.b;
            row.win_clipped = w.clipped;
            let n = window_norms_with(state, prep.ux(), w.a, w.b)?;
            row.win_l2 = n.l2;
            row.win_h1 = n.h1;
        }
        Ok(row)
    }
}

impl Observer for VirialSeries {
    fn observe(&mut self, state: &State) -> Result<()> {
        self.push(state)
    }
}

/// Largest |u| over the outer 5% of the box at either end.
pub fn boundary_amplitude(state: &State) -> f64 {
    let u = state.values();
    let n = u.len();
    let edge = ((BOUNDARY_FRACTION * n as f64).ceil() as usize).max(1);
    u[..edge]
        .iter()
        .chain(&u[n - edge..])
        .fold(0.0, |m: f64, v| m.max(v.abs()))
}
