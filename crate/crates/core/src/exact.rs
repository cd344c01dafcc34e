//! Closed-form solutions used as solver oracles and as non-decay controls:
//! traveling solitons, mKdV breathers and Gardner breathers.

use crate::error::{Error, Result};
use crate::grid::{spectral_derivative, Field, Grid};
use crate::nonlinearity::NonlinearitySpec;
use crate::spectral;

/// A solution known in closed form, sampleable at any time.
pub trait ClosedForm {
    fn evaluate(&self, t: f64, grid: &Grid) -> Result<Field>;
}

/// Numerically stable hyperbolic secant.
pub(crate) fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    c: f64,
    p: u32,
    x0: f64,
}

impl SolitonParams {
    pub fn new(c: f64, p: u32, x0: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "soliton speed must be positive, got {c}"
            )));
        }
        if p != 2 && p != 3 {
            return Err(Error::InvalidParameter(format!(
                "closed-form solitons exist here for p = 2 or 3, got {p}"
            )));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter("soliton center must be finite".into()));
        }
        Ok(SolitonParams { c, p, x0 })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Stationary profile Q_c solving Q'' - cQ + Q^p = 0.
    pub fn profile(&self, y: f64) -> f64 {
        let c = self.c;
        match self.p {
            2 => 1.5 * c * sech(0.5 * c.sqrt() * y).powi(2),
            _ => (2.0 * c).sqrt() * sech(c.sqrt() * y),
        }
    }

    /// Second derivative of the profile, used by the ODE residual check.
    pub fn profile_second_derivative(&self, y: f64) -> f64 {
        let c = self.c;
        match self.p {
            2 => {
                // Q = A sech^2(k y): Q'' = A k^2 (4 sech^2 - 6 sech^4)
                let a = 1.5 * c;
                let k = 0.5 * c.sqrt();
                let s2 = sech(k * y).powi(2);
                a * k * k * (4.0 * s2 - 6.0 * s2 * s2)
            }
            _ => {
                // Q = A sech(k y): Q'' = A k^2 (sech - 2 sech^3)
                let a = (2.0 * c).sqrt();
                let k = c.sqrt();
                let s = sech(k * y);
                a * k * k * (s - 2.0 * s.powi(3))
            }
        }
    }
}

impl ClosedForm for SolitonParams {
    fn evaluate(&self, t: f64, grid: &Grid) -> Result<Field> {
        grid.sample(|x| self.profile(x - self.c * t - self.x0))
    }
}

pub fn soliton_profile(params: &SolitonParams, t: f64, grid: &Grid) -> Result<Field> {
    params.evaluate(t, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MkdvBreatherParams {
    alpha: f64,
    beta: f64,
    x0: f64,
}

impl MkdvBreatherParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::centered_at(alpha, beta, 0.0)
    }

    pub fn centered_at(alpha: f64, beta: f64, x0: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "breather needs alpha, beta > 0, got ({alpha}, {beta})"
            )));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter("breather center must be finite".into()));
        }
        Ok(MkdvBreatherParams { alpha, beta, x0 })
    }

    /// Standing breather (gamma = 0), beta = sqrt(3) alpha.
    pub fn standing(alpha: f64) -> Result<Self> {
        Self::new(alpha, 3f64.sqrt() * alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.alpha * self.alpha - 3.0 * self.beta * self.beta
    }

    pub fn gamma(&self) -> f64 {
        3.0 * self.alpha * self.alpha - self.beta * self.beta
    }

    /// Period of the internal oscillation seen in the envelope frame,
    /// 2 pi / (alpha |delta - gamma|).
    pub fn internal_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.alpha * (self.delta() - self.gamma()).abs())
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let y1 = x - self.x0 + self.delta() * t;
        let y2 = x - self.x0 + self.gamma() * t;
        let (sin, cos) = (a * y1).sin_cos();
        let sc = sech(b * y2);
        let th = (b * y2).tanh();
        // d/dx arctan(b sin / (a cosh)) with numerator and denominator
        // divided by cosh^2
        let num = a * b * sc * (a * cos - b * sin * th);
        let den = a * a + b * b * sin * sin * sc * sc;
        2.0 * std::f64::consts::SQRT_2 * num / den
    }
}

impl ClosedForm for MkdvBreatherParams {
    fn evaluate(&self, t: f64, grid: &Grid) -> Result<Field> {
        grid.sample(|x| self.value(t, x))
    }
}

pub fn mkdv_breather(params: &MkdvBreatherParams, t: f64, grid: &Grid) -> Result<Field> {
    params.evaluate(t, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GardnerBreatherParams {
    alpha: f64,
    beta: f64,
    mu: f64,
    x0: f64,
}

impl GardnerBreatherParams {
    /// Fails unless Delta = alpha^2 + beta^2 - 2/(9 mu) > 0.
    pub fn new(alpha: f64, beta: f64, mu: f64) -> Result<Self> {
        Self::centered_at(alpha, beta, mu, 0.0)
    }

    pub fn centered_at(alpha: f64, beta: f64, mu: f64, x0: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "breather needs alpha, beta > 0, got ({alpha}, {beta})"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Gardner breathers need mu > 0, got {mu}"
            )));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter("breather center must be finite".into()));
        }
        let delta = admissibility(alpha, beta, mu);
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::Inadmissible { delta });
        }
        Ok(GardnerBreatherParams {
            alpha,
            beta,
            mu,
            x0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.alpha * self.alpha - 3.0 * self.beta * self.beta
    }

    pub fn gamma(&self) -> f64 {
        3.0 * self.alpha * self.alpha - self.beta * self.beta
    }

    /// Admissibility discriminant Delta = alpha^2 + beta^2 - 2/(9 mu).
    pub fn discriminant(&self) -> f64 {
        admissibility(self.alpha, self.beta, self.mu)
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let (a, b, mu) = (self.alpha, self.beta, self.mu);
        let big_delta = self.discriminant();
        let r = (a * a + b * b).sqrt();
        let y1 = x - self.x0 + self.delta() * t;
        let y2 = x - self.x0 + self.gamma() * t;
        let c1 = b * r / (a * big_delta.sqrt());
        let c2 = std::f64::consts::SQRT_2 * b / (3.0 * mu.sqrt() * big_delta);
        let c3 = std::f64::consts::SQRT_2 * b / (3.0 * mu.sqrt() * a * r * big_delta.sqrt());

        // G and F grow like exp(b |y2|); everything is scaled by
        // s = exp(-b |y2|), which cancels in (G'F - GF') / (F^2 + G^2).
        let z = b * y2;
        let e = (-2.0 * z.abs()).exp();
        let s = (-z.abs()).exp();
        let cosh_s = 0.5 * (1.0 + e);
        let sinh_s = 0.5 * z.signum() * (1.0 - e);
        // cosh + sinh = exp(z)
        let exp_s = if z >= 0.0 { 1.0 } else { e };

        let (sin, cos) = (a * y1).sin_cos();
        let g = c1 * sin * s - c2 * exp_s;
        let gx = c1 * a * cos * s - c2 * b * exp_s;
        let f = cosh_s - c3 * (a * cos - b * sin) * s;
        let fx = b * sinh_s + c3 * (a * a * sin + a * b * cos) * s;
        2.0 * (2.0 / mu).sqrt() * (gx * f - g * fx) / (f * f + g * g)
    }

    pub fn equation(&self) -> NonlinearitySpec {
        NonlinearitySpec::gardner(self.mu).expect("mu validated at construction")
    }
}

pub fn admissibility(alpha: f64, beta: f64, mu: f64) -> f64 {
    alpha * alpha + beta * beta - 2.0 / (9.0 * mu)
}

impl ClosedForm for GardnerBreatherParams {
    fn evaluate(&self, t: f64, grid: &Grid) -> Result<Field> {
        grid.sample(|x| self.value(t, x))
    }
}

pub fn gardner_breather(params: &GardnerBreatherParams, t: f64, grid: &Grid) -> Result<Field> {
    params.evaluate(t, grid)
}

/// The zero solution, which solves every equation in the family.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl ClosedForm for Zero {
    fn evaluate(&self, _t: f64, grid: &Grid) -> Result<Field> {
        Ok(Field::zeros(*grid))
    }
}

pub const DEFAULT_DT_PROBE: f64 = 1e-6;

/// Max-norm residual of u_t + (u_xx + f(u))_x with a central difference in
/// time and spectral derivatives in space.
pub fn pde_residual(
    solution: &dyn ClosedForm,
    t: f64,
    grid: &Grid,
    spec: &NonlinearitySpec,
    dt_probe: f64,
) -> Result<f64> {
    if !(1e-8..=1e-4).contains(&dt_probe) {
        return Err(Error::InvalidParameter(format!(
            "dt_probe must lie in [1e-8, 1e-4], got {dt_probe}"
        )));
    }
    let now = solution.evaluate(t, grid)?;
    let ahead = solution.evaluate(t + dt_probe, grid)?;
    let behind = solution.evaluate(t - dt_probe, grid)?;
    let u = now.values();
    let uxx = &spectral::derivatives(u, grid.half_length(), &[2])[0];
    let flux: Vec<f64> = u
        .iter()
        .zip(uxx)
        .map(|(&v, &d2)| d2 + spec.eval_f(v))
        .collect();
    let dflux = spectral_derivative(&Field::new(*grid, flux)?, 1)?;
    Ok(ahead
        .values()
        .iter()
        .zip(behind.values())
        .zip(dflux.values())
        .map(|((p, m), d)| ((p - m) / (2.0 * dt_probe) + d).abs())
        .fold(0.0, f64::max))
}
