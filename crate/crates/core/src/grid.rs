//! Periodic grid, sampled fields, spectral differentiation, quadrature and
//! norms.

use crate::error::{Error, Result};
use crate::spectral;

/// Uniform periodic mesh on `[-L, L)` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_length: f64,
    n: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half length must be positive and finite, got {half_length}"
            )));
        }
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= {}, got {n}",
                Self::MIN_POINTS
            )));
        }
        Ok(Grid { half_length, n })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let h = self.spacing();
        let l = self.half_length;
        (0..self.n).map(move |j| -l + j as f64 * h)
    }

    /// Largest resolved angular wavenumber, pi*n/(2L).
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / (2.0 * self.half_length)
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(*self, self.points().map(f).collect())
    }
}

/// Real samples `values[j] = u(x_j)` on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: vec![0.0; grid.n()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mirror image u(x) -> u(-x) on the periodic grid (x_j -> x_{n-j}).
    pub fn reflected(&self) -> Field {
        let n = self.values.len();
        let values = (0..n).map(|j| self.values[(n - j) % n]).collect();
        Field {
            grid: self.grid,
            values,
        }
    }
}

/// Solution sample at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub time: f64,
    pub field: Field,
}

impl State {
    pub fn new(time: f64, field: Field) -> Result<Self> {
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "state time must be finite and nonnegative, got {time}"
            )));
        }
        Ok(State { time, field })
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.field.values()
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Derivative of the trigonometric interpolant of `f`.
pub fn spectral_derivative(f: &Field, order: u32) -> Result<Field> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidOrder(order));
    }
    check_finite(f.values())?;
    let mut out = spectral::derivatives(f.values(), f.grid().half_length(), &[order]);
    Ok(Field {
        grid: *f.grid(),
        values: out.pop().expect("one order requested"),
    })
}

/// Rectangle-rule quadrature over the periodic box.
pub fn integrate(f: &Field) -> Result<f64> {
    check_finite(f.values())?;
    Ok(f.grid().spacing() * f.values().iter().sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub h1: f64,
    pub linf: f64,
}

pub fn norms(s: &State) -> Norms {
    let u = s.values();
    let h = s.grid().spacing();
    let ux = &spectral::derivatives(u, s.grid().half_length(), &[1])[0];
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut d2 = 0.0;
    let mut linf: f64 = 0.0;
    for (&v, &dv) in u.iter().zip(ux) {
        l1 += v.abs();
        l2 += v * v;
        d2 += dv * dv;
        linf = linf.max(v.abs());
    }
    Norms {
        l1: h * l1,
        l2: (h * l2).sqrt(),
        h1: (h * (l2 + d2)).sqrt(),
        linf,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowNorms {
    pub l2: f64,
    pub h1: f64,
}

/// L2 and H1 norms restricted to the grid points in `[a, b]`.
pub fn window_norms(s: &State, a: f64, b: f64) -> Result<WindowNorms> {
    let ux = &spectral::derivatives(s.values(), s.grid().half_length(), &[1])[0];
    window_norms_with(s, ux, a, b)
}

pub(crate) fn window_norms_with(s: &State, ux: &[f64], a: f64, b: f64) -> Result<WindowNorms> {
    let grid = s.grid();
    let l = grid.half_length();
    let bad = |reason: &str| Error::InvalidWindow {
        a,
        b,
        reason: reason.to_string(),
    };
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(bad("need finite a < b"));
    }
    if a < -l || b >= l {
        return Err(bad("window must lie inside [-L, L)"));
    }
    let h = grid.spacing();
    let first = ((a + l) / h).ceil() as usize;
    let mut l2 = 0.0;
    let mut d2 = 0.0;
    let mut count = 0usize;
    for j in first..grid.n() {
        let x = grid.x(j);
        if x > b {
            break;
        }
        if x < a {
            continue;
        }
        let v = s.values()[j];
        l2 += v * v;
        d2 += ux[j] * ux[j];
        count += 1;
    }
    if count == 0 {
        return Err(bad("no grid points inside the window"));
    }
    Ok(WindowNorms {
        l2: (h * l2).sqrt(),
        h1: (h * (l2 + d2)).sqrt(),
    })
}
