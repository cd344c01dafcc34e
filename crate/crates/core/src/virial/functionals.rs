//! The functionals I, J, K and the right-hand sides of their time
//! derivatives along solutions, plus the localized decay integrands.
//!
//! With weights evaluated at x/lambda and f(u) = u^p + f1(u):
//!
//! ```text
//! I = int psi u
//! I' = -(l'/l) int (x/l) psi' u + l^-3 int psi''' u + l^-1 int psi' f(u)
//!
//! J = 1/2 int phi u^2
//! J' = -(l'/2l) int (x/l) phi' u^2 - (3/2l) int phi' u_x^2
//!      + (1/2l^3) int phi''' u^2 + l^-1 int phi' (u f(u) - F(u))
//!
//! K = 1/2 int phi (u_x^2 - 2F(u))
//! K' = -(l'/2l) int (x/l) phi' (u_x^2 - 2F) - (3/2l) int phi' u_xx^2
//!      + (1/2l^3) int phi''' u_x^2 + l^-3 int phi''' u^{p+1}/(p+1)
//!      + l^-3 int phi''' F1(u) + (2/l) int phi' (f(u))_x u_x
//!      + (2/l^2) int phi'' f(u) u_x - (1/2l) int phi' f(u)^2
//! ```
//!
//! For p = 2, u f(u) - F(u) = (2/3)u^3 + u f1(u) - F1(u).

use crate::error::Result;
use crate::grid::State;
use crate::nonlinearity::NonlinearitySpec;
use crate::spectral;

use super::scaling::{lambda_eval, Scaling, ScalingLaw};
use super::weights::{weight_eval, WeightProfile, WeightValues};

/// Trapezoid sums of a weight w(x/lambda) against a band-limited field
/// converge like exp(-2 pi d lambda / h), where d is the distance from the
/// real axis to the nearest pole of the weight. Grids are refined until the
/// exponent reaches this value.
const QUADRATURE_EXPONENT: f64 = 36.0;

/// Refinement factor for which weighted sums with `profiles` at scale
/// `lambda` are accurate to about exp(-36) relative to the weight size on
/// a grid of spacing `h`.
pub fn refinement(h: f64, lambda: f64, profiles: &[WeightProfile]) -> usize {
    let d = profiles
        .iter()
        .map(|p| p.pole_distance())
        .fold(f64::INFINITY, f64::min);
    let h_max = 2.0 * std::f64::consts::PI * d * lambda / QUADRATURE_EXPONENT;
    if !(h_max.is_finite() && h_max > 0.0) {
        return 1;
    }
    ((h / h_max).ceil() as usize).max(1)
}

/// A state together with the spectral derivatives and nonlinear terms
/// the functionals need, so that several functionals can share them.
/// The weighted sums run over a grid refined `refine` times by spectral
/// interpolation, which steep weights need on coarse grids.
#[derive(Debug, Clone)]
pub struct PreparedState<'a> {
    state: &'a State,
    spec: NonlinearitySpec,
    refine: usize,
    /// values on the refined grid
    u: Vec<f64>,
    ux_fine: Vec<f64>,
    uxx_fine: Vec<f64>,
    f: Vec<f64>,
    fx: Vec<f64>,
    /// derivatives at the state's own grid points
    ux: Vec<f64>,
    uxx: Vec<f64>,
}

impl<'a> PreparedState<'a> {
    pub fn new(state: &'a State, spec: &NonlinearitySpec) -> Self {
        Self::refined(state, spec, 1)
    }

    /// Prepares the weighted sums on a grid refined `refine` times.
    pub fn refined(state: &'a State, spec: &NonlinearitySpec, refine: usize) -> Self {
        let refine = refine.max(1);
        let l = state.grid().half_length();
        let (u, ux_fine, uxx_fine) = if refine == 1 {
            let mut d = spectral::derivatives(state.values(), l, &[1, 2]);
            let uxx = d.pop().expect("two orders requested");
            let ux = d.pop().expect("two orders requested");
            (state.values().to_vec(), ux, uxx)
        } else {
            let mut d = spectral::refined_derivatives(state.values(), l, &[0, 1, 2], refine);
            let uxx = d.pop().expect("three orders requested");
            let ux = d.pop().expect("three orders requested");
            (d.pop().expect("three orders requested"), ux, uxx)
        };
        let f: Vec<f64> = u.iter().map(|&v| spec.eval_f(v)).collect();
        // chain rule rather than a spectral derivative: f(u) carries
        // wavenumbers beyond the grid's, which would alias
        let fx = u.iter().zip(&ux_fine).map(|(&v, &d)| spec.eval_df(v) * d).collect();
        let (ux, uxx) = if refine == 1 {
            (ux_fine.clone(), uxx_fine.clone())
        } else {
            (
                ux_fine.iter().step_by(refine).copied().collect(),
                uxx_fine.iter().step_by(refine).copied().collect(),
            )
        };
        PreparedState {
            state,
            spec: spec.clone(),
            refine,
            u,
            ux_fine,
            uxx_fine,
            f,
            fx,
            ux,
            uxx,
        }
    }

    pub fn state(&self) -> &State {
        self.state
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    /// u_x at the state's grid points.
    pub fn ux(&self) -> &[f64] {
        &self.ux
    }

    /// u_xx at the state's grid points.
    pub fn uxx(&self) -> &[f64] {
        &self.uxx
    }

    /// Spacing of the refined grid.
    fn spacing(&self) -> f64 {
        self.state.grid().spacing() / self.refine as f64
    }

    /// Points of the refined grid.
    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let (l, h) = (self.state.grid().half_length(), self.spacing());
        (0..self.u.len()).map(move |j| -l + h * j as f64)
    }

    /// Calls `g(x/lambda, weight(x/lambda), j)` for every refined point.
    fn each_weighted(
        &self,
        profile: WeightProfile,
        s: &Scaling,
        mut g: impl FnMut(f64, &WeightValues, usize),
    ) {
        for (j, x) in self.points().enumerate() {
            let y = x / s.lambda;
            g(y, &weight_eval(profile, y), j);
        }
    }

    pub fn functional_i(&self, psi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let mut acc = 0.0;
        self.each_weighted(psi, s, |_, w, j| acc += w.w * u[j]);
        self.spacing() * acc
    }

    pub fn di_dt_rhs(&self, psi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let lam = s.lambda;
        let (mut transport, mut dispersion, mut flux) = (0.0, 0.0, 0.0);
        self.each_weighted(psi, s, |y, w, j| {
            transport += y * w.d1 * u[j];
            dispersion += w.d3 * u[j];
            flux += w.d1 * self.f[j];
        });
        let h = self.spacing();
        h * (-s.ratio * transport + dispersion / lam.powi(3) + flux / lam)
    }

    pub fn functional_j(&self, phi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let mut acc = 0.0;
        self.each_weighted(phi, s, |_, w, j| acc += w.w * u[j] * u[j]);
        0.5 * self.spacing() * acc
    }

    pub fn dj_dt_rhs(&self, phi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let lam = s.lambda;
        let (mut t1, mut t2, mut t3, mut t4) = (0.0, 0.0, 0.0, 0.0);
        self.each_weighted(phi, s, |y, w, j| {
            let v = u[j];
            t1 += y * w.d1 * v * v;
            t2 += w.d1 * self.ux_fine[j] * self.ux_fine[j];
            t3 += w.d3 * v * v;
            t4 += w.d1 * (v * self.f[j] - self.spec.eval_big_f(v));
        });
        let h = self.spacing();
        h * (-0.5 * s.ratio * t1 - 1.5 / lam * t2 + 0.5 / lam.powi(3) * t3 + t4 / lam)
    }

    pub fn functional_k(&self, phi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let mut acc = 0.0;
        self.each_weighted(phi, s, |_, w, j| {
            acc += w.w * (self.ux_fine[j] * self.ux_fine[j] - 2.0 * self.spec.eval_big_f(u[j]));
        });
        0.5 * self.spacing() * acc
    }

    pub fn dk_dt_rhs(&self, phi: WeightProfile, s: &Scaling) -> f64 {
        let u = &self.u;
        let lam = s.lambda;
        let p = self.spec.p();
        let mut t = [0.0f64; 8];
        self.each_weighted(phi, s, |y, w, j| {
            let (v, vx, vxx, f) = (u[j], self.ux_fine[j], self.uxx_fine[j], self.f[j]);
            let big_f = self.spec.eval_big_f(v);
            t[0] += y * w.d1 * (vx * vx - 2.0 * big_f);
            t[1] += w.d1 * vxx * vxx;
            t[2] += w.d3 * vx * vx;
            t[3] += w.d3 * v.powi(p as i32 + 1) / (p + 1) as f64;
            t[4] += w.d3 * self.spec.eval_big_f1(v);
            t[5] += w.d1 * self.fx[j] * vx;
            t[6] += w.d2 * f * vx;
            t[7] += w.d1 * f * f;
        });
        let h = self.spacing();
        let l3 = lam.powi(3);
        h * (-0.5 * s.ratio * t[0] - 1.5 / lam * t[1] + 0.5 / l3 * t[2]
            + t[3] / l3
            + t[4] / l3
            + 2.0 / lam * t[5]
            + 2.0 / (lam * lam) * t[6]
            - 0.5 / lam * t[7])
    }

    pub fn decay_integrands(&self, s: &Scaling, kato_c0: f64) -> DecayIntegrands {
        let u = &self.u;
        let lam = s.lambda;
        let (mut i2, mut i3, mut i9, mut kato) = (0.0, 0.0, 0.0, 0.0);
        for (j, x) in self.points().enumerate() {
            let sc2 = crate::exact::sech(x / lam).powi(2);
            let (v, vx, vxx) = (u[j], self.ux_fine[j], self.uxx_fine[j]);
            i2 += sc2 * v * v;
            i3 += sc2 * sc2 * vx * vx;
            i9 += sc2 * sc2 * sc2 * vxx * vxx;
            kato += (-kato_c0 * x.abs()).exp() * (v * v + vx * vx + vxx * vxx);
        }
        let h = self.spacing();
        DecayIntegrands {
            i2: h * i2 / lam,
            i3: h * i3 / lam,
            i9: h * i9 / lam,
            kato: h * kato,
        }
    }
}

/// Localized quantities whose time integrals the decay estimates bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayIntegrands {
    /// lambda^-1 int sech^2(x/lambda) u^2
    pub i2: f64,
    /// lambda^-1 int sech^4(x/lambda) u_x^2
    pub i3: f64,
    /// lambda^-1 int sech^6(x/lambda) u_xx^2
    pub i9: f64,
    /// int exp(-c0 |x|) (u^2 + u_x^2 + u_xx^2)
    pub kato: f64,
}

/// Prepares `s` on a grid fine enough for weights `profiles` at `sc`.
fn prepare<'a>(
    s: &'a State,
    spec: &NonlinearitySpec,
    sc: &Scaling,
    profiles: &[WeightProfile],
) -> PreparedState<'a> {
    let m = refinement(s.grid().spacing(), sc.lambda, profiles);
    PreparedState::refined(s, spec, m)
}

pub fn functional_i(s: &State, psi: WeightProfile, law: ScalingLaw, t: f64) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, &NonlinearitySpec::kdv(), &sc, &[psi]).functional_i(psi, &sc))
}

pub fn di_dt_rhs(
    s: &State,
    psi: WeightProfile,
    law: ScalingLaw,
    t: f64,
    spec: &NonlinearitySpec,
) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, spec, &sc, &[psi]).di_dt_rhs(psi, &sc))
}

pub fn functional_j(s: &State, phi: WeightProfile, law: ScalingLaw, t: f64) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, &NonlinearitySpec::kdv(), &sc, &[phi]).functional_j(phi, &sc))
}

pub fn dj_dt_rhs(
    s: &State,
    phi: WeightProfile,
    law: ScalingLaw,
    t: f64,
    spec: &NonlinearitySpec,
) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, spec, &sc, &[phi]).dj_dt_rhs(phi, &sc))
}

pub fn functional_k(
    s: &State,
    phi: WeightProfile,
    law: ScalingLaw,
    t: f64,
    spec: &NonlinearitySpec,
) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, spec, &sc, &[phi]).functional_k(phi, &sc))
}

pub fn dk_dt_rhs(
    s: &State,
    phi: WeightProfile,
    law: ScalingLaw,
    t: f64,
    spec: &NonlinearitySpec,
) -> Result<f64> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, spec, &sc, &[phi]).dk_dt_rhs(phi, &sc))
}

pub fn decay_integrands(
    s: &State,
    law: ScalingLaw,
    t: f64,
    spec: &NonlinearitySpec,
    kato_c0: f64,
) -> Result<DecayIntegrands> {
    let sc = lambda_eval(law, t)?;
    Ok(prepare(s, spec, &sc, &[WeightProfile::Sech(2)]).decay_integrands(&sc, kato_c0))
}
