//! Virial diagnostics: the scale lambda(t), weight profiles, the weighted
//! functionals I, J, K with the exact right-hand sides of their time
//! derivatives, localized decay integrands and the window norms.

mod functionals;
mod scaling;
mod series;
mod weights;

pub use functionals::{
    decay_integrands, di_dt_rhs, dj_dt_rhs, dk_dt_rhs, functional_i, functional_j, functional_k,
    refinement, DecayIntegrands, PreparedState,
};
pub use scaling::{lambda_eval, window_interval, Scaling, ScalingLaw, WindowInterval};
pub use series::{
    boundary_amplitude, VirialRow, VirialSeries, VirialSettings, PHI_J, PHI_J_LOCAL, PHI_K,
    PHI_K_LOCAL, PSI_I,
};
pub use weights::{weight_eval, WeightProfile, WeightValues};
