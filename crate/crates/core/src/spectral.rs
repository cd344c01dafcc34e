//! FFT plumbing shared by the grid operations, the integrator and the
//! diagnostics. Plans are cached per transform length.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

pub(crate) struct Plans {
    pub n: usize,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();

pub(crate) fn plans(n: usize) -> Arc<Plans> {
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = RealFftPlanner::<f64>::new();
            Arc::new(Plans {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

impl Plans {
    pub fn spectrum_len(&self) -> usize {
        self.n / 2 + 1
    }

    /// Unnormalized forward transform. `input` is used as scratch.
    pub fn forward(&self, input: &mut [f64], output: &mut [Complex64]) {
        self.forward
            .process(input, output)
            .expect("forward FFT buffer sizes are fixed by the plan");
    }

    /// Inverse transform including the 1/n normalization. The imaginary
    /// parts of the DC and Nyquist bins are discarded.
    pub fn inverse(&self, input: &mut [Complex64], output: &mut [f64]) {
        input[0].im = 0.0;
        let last = input.len() - 1;
        input[last].im = 0.0;
        self.inverse
            .process(input, output)
            .expect("inverse FFT buffer sizes are fixed by the plan");
        let scale = 1.0 / self.n as f64;
        for v in output.iter_mut() {
            *v *= scale;
        }
    }

    pub fn forward_vec(&self, values: &[f64]) -> Vec<Complex64> {
        let mut scratch = values.to_vec();
        let mut out = vec![Complex64::new(0.0, 0.0); self.spectrum_len()];
        self.forward(&mut scratch, &mut out);
        out
    }
}

/// Angular wavenumbers pi*k/L for k = 0..=n/2.
pub(crate) fn wavenumbers(n: usize, half_length: f64) -> Vec<f64> {
    let base = std::f64::consts::PI / half_length;
    (0..=n / 2).map(|k| base * k as f64).collect()
}

/// Multiplies a half spectrum by (i k)^order. The Nyquist bin is zeroed for
/// odd orders, where its derivative is not representable by a real signal.
pub(crate) fn apply_derivative(spectrum: &mut [Complex64], wavenumbers: &[f64], order: u32) {
    let i = Complex64::new(0.0, 1.0);
    for (c, &k) in spectrum.iter_mut().zip(wavenumbers) {
        *c *= (i * k).powu(order);
    }
    if order % 2 == 1 {
        if let Some(last) = spectrum.last_mut() {
            *last = Complex64::new(0.0, 0.0);
        }
    }
}

/// The requested derivatives of `values`, evaluated by zero padding on the
/// grid refined `refine` times (same box, spacing h / refine). With
/// `refine > 1` the Nyquist bin is dropped, so the refined samples agree
/// with the band-limited interpolant of the resolved modes.
pub(crate) fn refined_derivatives(
    values: &[f64],
    half_length: f64,
    orders: &[u32],
    refine: usize,
) -> Vec<Vec<f64>> {
    if refine <= 1 {
        return derivatives(values, half_length, orders);
    }
    let n = values.len();
    let m = refine * n;
    let fine = plans(m);
    let k = wavenumbers(n, half_length);
    let mut base = plans(n).forward_vec(values);
    let last = base.len() - 1;
    base[last] = Complex64::new(0.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut work = vec![zero; fine.spectrum_len()];
    orders
        .iter()
        .map(|&order| {
            work.fill(zero);
            work[..base.len()].copy_from_slice(&base);
            apply_derivative(&mut work[..base.len()], &k, order);
            let mut out = vec![0.0; m];
            fine.inverse(&mut work, &mut out);
            for v in out.iter_mut() {
                *v *= refine as f64;
            }
            out
        })
        .collect()
}

/// Returns the requested derivatives of `values`, sharing one forward FFT.
pub(crate) fn derivatives(values: &[f64], half_length: f64, orders: &[u32]) -> Vec<Vec<f64>> {
    let n = values.len();
    let plans = plans(n);
    let k = wavenumbers(n, half_length);
    let base = plans.forward_vec(values);
    let mut work = vec![Complex64::new(0.0, 0.0); base.len()];
    orders
        .iter()
        .map(|&order| {
            work.copy_from_slice(&base);
            apply_derivative(&mut work, &k, order);
            let mut out = vec![0.0; n];
            plans.inverse(&mut work, &mut out);
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refined_derivatives_interpolate_band_limited_fields() {
        let (l, n) = (5.0, 32);
        let w = 3.0 * std::f64::consts::PI / l;
        let values: Vec<f64> = (0..n)
            .map(|j| (w * (-l + 2.0 * l * j as f64 / n as f64)).sin())
            .collect();
        let d = refined_derivatives(&values, l, &[0, 1, 2], 3);
        let h = 2.0 * l / (3 * n) as f64;
        for j in 0..3 * n {
            let x = -l + h * j as f64;
            assert!((d[0][j] - (w * x).sin()).abs() < 1e-13);
            assert!((d[1][j] - w * (w * x).cos()).abs() < 1e-12);
            assert!((d[2][j] + w * w * (w * x).sin()).abs() < 1e-11);
        }
        // refine = 1 falls back to the plain derivatives
        assert_eq!(refined_derivatives(&values, l, &[1], 1), derivatives(&values, l, &[1]));
    }
}
