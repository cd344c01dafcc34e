//! Polynomial nonlinearities f(s) = s^p + f1(s), with every monomial of f1
//! of degree strictly above p.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub degree: u32,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearitySpec {
    p: u32,
    f1: Vec<Monomial>,
}

impl NonlinearitySpec {
    pub fn new(p: u32, f1: Vec<Monomial>) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!(
                "leading power p must be >= 2, got {p}"
            )));
        }
        for m in &f1 {
            if m.degree <= p {
                return Err(Error::InvalidParameter(format!(
                    "f1 monomial of degree {} does not exceed p = {p}",
                    m.degree
                )));
            }
            if !m.coeff.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "f1 coefficient of degree {} is not finite",
                    m.degree
                )));
            }
        }
        Ok(NonlinearitySpec { p, f1 })
    }

    /// f(s) = s^2.
    pub fn kdv() -> Self {
        NonlinearitySpec { p: 2, f1: vec![] }
    }

    /// f(s) = s^3.
    pub fn mkdv() -> Self {
        NonlinearitySpec { p: 3, f1: vec![] }
    }

    /// f(s) = s^2 + mu s^3.
    pub fn gardner(mu: f64) -> Result<Self> {
        Self::new(
            2,
            vec![Monomial {
                degree: 3,
                coeff: mu,
            }],
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f1(&self) -> &[Monomial] {
        &self.f1
    }

    /// Highest polynomial degree of f.
    pub fn max_degree(&self) -> u32 {
        self.f1.iter().map(|m| m.degree).fold(self.p, u32::max)
    }

    pub fn eval_f(&self, s: f64) -> f64 {
        s.powi(self.p as i32) + self.eval_f1(s)
    }

    pub fn eval_f1(&self, s: f64) -> f64 {
        self.f1.iter().map(|m| m.coeff * s.powi(m.degree as i32)).sum()
    }

    /// f'(s).
    pub fn eval_df(&self, s: f64) -> f64 {
        let lead = self.p as f64 * s.powi(self.p as i32 - 1);
        lead + self
            .f1
            .iter()
            .map(|m| m.coeff * m.degree as f64 * s.powi(m.degree as i32 - 1))
            .sum::<f64>()
    }

    /// Antiderivative of f1 with F1(0) = 0.
    pub fn eval_big_f1(&self, s: f64) -> f64 {
        self.f1
            .iter()
            .map(|m| m.coeff * s.powi(m.degree as i32 + 1) / (m.degree + 1) as f64)
            .sum()
    }

    /// Antiderivative of f with F(0) = 0.
    pub fn eval_big_f(&self, s: f64) -> f64 {
        s.powi(self.p as i32 + 1) / (self.p + 1) as f64 + self.eval_big_f1(s)
    }

    /// Advisory check that the leading power dominates on |s| <= amplitude,
    /// i.e. s^p + f1(s) >= s^p / 2 for even p (|f1(s)| <= |s|^p / 2 for odd
    /// p). Passes if either the coefficient bound or a 1000-point sampling
    /// test passes.
    pub fn check_smallness_domination(&self, amplitude: f64) -> bool {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return false;
        }
        if self.f1.is_empty() || amplitude == 0.0 {
            return true;
        }
        let bound: f64 = self
            .f1
            .iter()
            .map(|m| m.coeff.abs() * amplitude.powi((m.degree - self.p) as i32))
            .sum();
        if bound <= 0.5 {
            return true;
        }
        const SAMPLES: usize = 1000;
        let even = self.p.is_multiple_of(2);
        (0..SAMPLES).all(|i| {
            let s = -amplitude + 2.0 * amplitude * i as f64 / (SAMPLES - 1) as f64;
            let lead = s.powi(self.p as i32);
            if even {
                lead + self.eval_f1(s) >= 0.5 * lead
            } else {
                self.eval_f1(s).abs() <= 0.5 * lead.abs()
            }
        })
    }
}
