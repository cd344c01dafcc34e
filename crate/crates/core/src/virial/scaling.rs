use crate::error::{Error, Result};
use crate::grid::Grid;

/// Length scale lambda(t) of the virial weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingLaw {
    /// lambda = sqrt(t) / ln t, defined for t >= 2.
    Dynamic,
    /// lambda = c0 for all t.
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub lambda: f64,
    pub lambda_prime: f64,
    /// lambda' / lambda
    pub ratio: f64,
}

pub fn lambda_eval(law: ScalingLaw, t: f64) -> Result<Scaling> {
    match law {
        ScalingLaw::Constant(c0) => {
            if !(c0.is_finite() && c0 > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "constant scale must be positive, got {c0}"
                )));
            }
            Ok(Scaling {
                lambda: c0,
                lambda_prime: 0.0,
                ratio: 0.0,
            })
        }
        ScalingLaw::Dynamic => {
            if !(t.is_finite() && t >= 2.0) {
                return Err(Error::ScalingDomain(t));
            }
            let ln = t.ln();
            let sq = t.sqrt();
            let shape = 0.5 - 1.0 / ln;
            Ok(Scaling {
                lambda: sq / ln,
                lambda_prime: shape / (sq * ln),
                ratio: shape / t,
            })
        }
    }
}

/// Window (-C sqrt(t)/ln t, C sqrt(t)/ln t), possibly clipped to a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowInterval {
    pub a: f64,
    pub b: f64,
    pub clipped: bool,
}

/// The shrinking-relative-to-t window for `t >= 2`. With a grid the
/// endpoints are clipped into `[-L, L)` and `clipped` records whether that
/// happened.
pub fn window_interval(t: f64, c: f64, grid: Option<&Grid>) -> Result<WindowInterval> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window constant must be positive, got {c}"
        )));
    }
    let s = lambda_eval(ScalingLaw::Dynamic, t)?;
    let half = c * s.lambda;
    let mut w = WindowInterval {
        a: -half,
        b: half,
        clipped: false,
    };
    if let Some(g) = grid {
        let l = g.half_length();
        if w.a < -l {
            w.a = -l;
            w.clipped = true;
        }
        // the grid is half open; keep b on or below the last node
        let last = l - g.spacing();
        if w.b > last {
            w.b = last;
            w.clipped = true;
        }
    }
    Ok(w)
}
