//! Mass, L2 and energy monitors.

use crate::grid::State;
use crate::nonlinearity::NonlinearitySpec;
use crate::spectral;

/// Below this magnitude an initial value is treated as zero and drifts are
/// reported in absolute terms.
const RELATIVE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    /// int u
    pub mass: f64,
    /// int u^2
    pub l2: f64,
    /// int (u_x^2 / 2 - F(u))
    pub energy: f64,
}

pub fn invariants(state: &State, spec: &NonlinearitySpec) -> Invariants {
    let u = state.values();
    let h = state.grid().spacing();
    let ux = &spectral::derivatives(u, state.grid().half_length(), &[1])[0];
    invariants_with(u, ux, h, spec)
}

pub(crate) fn invariants_with(u: &[f64], ux: &[f64], h: f64, spec: &NonlinearitySpec) -> Invariants {
    let (mut mass, mut l2, mut energy) = (0.0, 0.0, 0.0);
    for (&v, &d) in u.iter().zip(ux) {
        mass += v;
        l2 += v * v;
        energy += 0.5 * d * d - spec.eval_big_f(v);
    }
    Invariants {
        mass: h * mass,
        l2: h * l2,
        energy: h * energy,
    }
}

fn drift(initial: f64, current: f64) -> f64 {
    if initial.abs() < RELATIVE_FLOOR {
        current - initial
    } else {
        (current - initial) / initial.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    pub time: f64,
    pub mass: f64,
    pub l2: f64,
    pub energy: f64,
    pub drift_mass: f64,
    pub drift_l2: f64,
    pub drift_energy: f64,
}

impl ConservationReport {
    pub fn from_invariants(time: f64, initial: &Invariants, now: &Invariants) -> Self {
        ConservationReport {
            time,
            mass: now.mass,
            l2: now.l2,
            energy: now.energy,
            drift_mass: drift(initial.mass, now.mass),
            drift_l2: drift(initial.l2, now.l2),
            drift_energy: drift(initial.energy, now.energy),
        }
    }

    /// Largest of the three drifts in magnitude.
    pub fn max_drift(&self) -> f64 {
        self.drift_mass
            .abs()
            .max(self.drift_l2.abs())
            .max(self.drift_energy.abs())
    }
}

/// Invariants of every snapshot, with drifts relative to the first one.
pub fn conservation_report(snapshots: &[State], spec: &NonlinearitySpec) -> Vec<ConservationReport> {
    let Some(first) = snapshots.first() else {
        return Vec::new();
    };
    let initial = invariants(first, spec);
    snapshots
        .iter()
        .map(|s| ConservationReport::from_invariants(s.time, &initial, &invariants(s, spec)))
        .collect()
}
