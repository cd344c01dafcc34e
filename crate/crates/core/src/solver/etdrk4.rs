//! Fourth-order exponential time differencing Runge-Kutta (Cox-Matthews)
//! in Fourier space. The dispersive symbol i k^3 is integrated exactly;
//! the flux term -i k f(u)^ is evaluated pseudospectrally.

use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::nonlinearity::NonlinearitySpec;
use crate::spectral::{self, Plans};

const CONTOUR_POINTS: usize = 32;

/// Below this |z| the coefficients come from the contour mean; above it
/// the closed forms lose at most a few ulps to cancellation.
const CONTOUR_RADIUS: f64 = 0.5;

/// phi-type coefficients of the scheme for one Fourier mode.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    e: Complex64,
    e2: Complex64,
    q: Complex64,
    f1: Complex64,
    f2: Complex64,
    f3: Complex64,
}

fn coefficients(dt: f64, symbol: Complex64) -> Coefficients {
    let z = symbol * dt;
    let (q, f1, f2, f3) = if z.norm() < CONTOUR_RADIUS {
        // mean over a unit circle around z; the integrands are entire, so
        // the mean equals the value at the center without the cancellation
        // of the closed forms near z = 0
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for j in 0..CONTOUR_POINTS {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64;
            let lr = z + Complex64::from_polar(1.0, theta);
            for (a, v) in acc.iter_mut().zip(raw(lr)) {
                *a += v;
            }
        }
        let m = CONTOUR_POINTS as f64;
        (acc[0] / m, acc[1] / m, acc[2] / m, acc[3] / m)
    } else {
        let [q, f1, f2, f3] = raw(z);
        (q, f1, f2, f3)
    };
    Coefficients {
        e: z.exp(),
        e2: (z * 0.5).exp(),
        q: q * dt,
        f1: f1 * dt,
        f2: f2 * dt,
        f3: f3 * dt,
    }
}

fn raw(z: Complex64) -> [Complex64; 4] {
    let ez = z.exp();
    let z3 = z * z * z;
    [
        ((z * 0.5).exp() - 1.0) / z,
        (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
        (2.0 + z + ez * (z - 2.0)) / z3,
        (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3,
    ]
}

/// Zero-padding factor for evaluating f(u) without aliasing into the
/// retained band: 1 for quadratic f, ceil((d+1)/2) for degree d >= 3.
pub(crate) fn padding_factor(max_degree: u32) -> usize {
    if max_degree <= 2 {
        1
    } else {
        (max_degree as usize + 2) / 2
    }
}

struct FluxEvaluator {
    spec: NonlinearitySpec,
    n: usize,
    plans: Arc<Plans>,
    padded: Option<Arc<Plans>>,
    /// -i k, with the 2/3-rule mask folded in
    flux_factor: Vec<Complex64>,
    work_c: Vec<Complex64>,
    work_r: Vec<f64>,
}

impl FluxEvaluator {
    /// out = -i k P[f(u)]^ for the field with spectrum `v`.
    fn eval(&mut self, v: &[Complex64], out: &mut [Complex64]) {
        let len = v.len();
        let (plans, scale) = match &self.padded {
            None => (&self.plans, 1.0),
            Some(pad) => (pad, (pad.n / self.n) as f64),
        };
        self.work_c[..len].copy_from_slice(v);
        for c in self.work_c[len..].iter_mut() {
            *c = Complex64::new(0.0, 0.0);
        }
        plans.inverse(&mut self.work_c, &mut self.work_r);
        for u in self.work_r.iter_mut() {
            *u = self.spec.eval_f(*u * scale);
        }
        plans.forward(&mut self.work_r, &mut self.work_c);
        let inv = 1.0 / scale;
        for ((o, s), f) in out.iter_mut().zip(&self.work_c[..len]).zip(&self.flux_factor) {
            *o = s * f * inv;
        }
    }
}

pub(crate) struct Integrator {
    grid: Grid,
    flux: FluxEvaluator,
    coeffs: Vec<Coefficients>,
    nv: Vec<Complex64>,
    na: Vec<Complex64>,
    nb: Vec<Complex64>,
    nc: Vec<Complex64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
}

impl Integrator {
    pub fn new(grid: Grid, spec: &NonlinearitySpec, dt: f64, dealias: bool) -> Self {
        let n = grid.n();
        let plans = spectral::plans(n);
        let m = if dealias {
            padding_factor(spec.max_degree())
        } else {
            1
        };
        let padded = (m > 1).then(|| spectral::plans(m * n));
        let k = spectral::wavenumbers(n, grid.half_length());
        let nyquist = n / 2;
        let cutoff = n as f64 / 3.0;
        let mut coeffs = Vec::with_capacity(k.len());
        let mut flux_factor = Vec::with_capacity(k.len());
        for (j, &kj) in k.iter().enumerate() {
            let keep = j != nyquist && (!dealias || (j as f64) < cutoff);
            let symbol = if j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, kj * kj * kj)
            };
            coeffs.push(coefficients(dt, symbol));
            flux_factor.push(if keep {
                Complex64::new(0.0, -kj)
            } else {
                Complex64::new(0.0, 0.0)
            });
        }
        let len = k.len();
        let zero = Complex64::new(0.0, 0.0);
        let work_len = padded.as_ref().map_or(len, |p| p.spectrum_len());
        let flux = FluxEvaluator {
            spec: spec.clone(),
            n,
            plans,
            padded,
            flux_factor,
            work_c: vec![zero; work_len],
            work_r: vec![0.0; m * n],
        };
        Integrator {
            grid,
            flux,
            coeffs,
            nv: vec![zero; len],
            na: vec![zero; len],
            nb: vec![zero; len],
            nc: vec![zero; len],
            a: vec![zero; len],
            b: vec![zero; len],
            c: vec![zero; len],
        }
    }

    /// Unnormalized half spectrum of `values`, Nyquist bin projected out.
    pub fn to_spectrum(&self, values: &[f64]) -> Vec<Complex64> {
        let mut v = self.flux.plans.forward_vec(values);
        let last = v.len() - 1;
        v[last] = Complex64::new(0.0, 0.0);
        v
    }

    pub fn to_values(&self, spectrum: &[Complex64], out: &mut [f64]) {
        let mut scratch = spectrum.to_vec();
        self.flux.plans.inverse(&mut scratch, out);
    }

    /// Cheap upper bound on max |u| from the spectrum.
    pub fn amplitude_bound(&self, spectrum: &[Complex64]) -> f64 {
        let sum: f64 = spectrum
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { c.norm() } else { 2.0 * c.norm() })
            .sum();
        sum / self.grid.n() as f64
    }

    /// One ETDRK4 step in place.
    pub fn advance(&mut self, v: &mut [Complex64]) {
        self.flux.eval(v, &mut self.nv);
        for (j, c) in self.coeffs.iter().enumerate() {
            self.a[j] = c.e2 * v[j] + c.q * self.nv[j];
        }
        self.flux.eval(&self.a, &mut self.na);
        for (j, c) in self.coeffs.iter().enumerate() {
            self.b[j] = c.e2 * v[j] + c.q * self.na[j];
        }
        self.flux.eval(&self.b, &mut self.nb);
        for (j, c) in self.coeffs.iter().enumerate() {
            self.c[j] = c.e2 * self.a[j] + c.q * (2.0 * self.nb[j] - self.nv[j]);
        }
        self.flux.eval(&self.c, &mut self.nc);
        for (j, c) in self.coeffs.iter().enumerate() {
            v[j] = c.e * v[j]
                + c.f1 * self.nv[j]
                + 2.0 * c.f2 * (self.na[j] + self.nb[j])
                + c.f3 * self.nc[j];
        }
    }
}
