use crate::exact::sech;

/// Weight profiles used in the virial functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightProfile {
    /// tanh(k x): increasing, bounded by 1.
    Tanh(u32),
    /// sech(x)^m: even, positive, bounded by 1.
    Sech(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValues {
    pub w: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl WeightProfile {
    /// Distance from the real axis to the nearest complex singularity,
    /// which sets how fine a grid the profile needs.
    pub fn pole_distance(self) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        match self {
            WeightProfile::Tanh(k) => half_pi / k.max(1) as f64,
            WeightProfile::Sech(_) => half_pi,
        }
    }
}

/// Beyond this argument tanh is exactly +-1 in double precision.
const TANH_SATURATION: f64 = 20.0;

/// Closed-form value and first three derivatives of the profile.
pub fn weight_eval(profile: WeightProfile, x: f64) -> WeightValues {
    match profile {
        WeightProfile::Tanh(k) => {
            let k = k as f64;
            if (k * x).abs() >= TANH_SATURATION {
                // tanh rounds to +-1 here, and every derivative to 0
                return WeightValues {
                    w: x.signum(),
                    d1: 0.0,
                    d2: 0.0,
                    d3: 0.0,
                };
            }
            let t = (k * x).tanh();
            let s2 = 1.0 - t * t;
            WeightValues {
                w: t,
                d1: k * s2,
                d2: -2.0 * k * k * t * s2,
                d3: -2.0 * k * k * k * s2 * (1.0 - 3.0 * t * t),
            }
        }
        WeightProfile::Sech(m) => {
            let sm = sech(x).powi(m as i32);
            let m = m as f64;
            let t = x.tanh();
            let t2 = t * t;
            WeightValues {
                w: sm,
                d1: -m * sm * t,
                d2: sm * ((m * m + m) * t2 - m),
                d3: sm * t * (3.0 * m * m + 2.0 * m - (m * m * m + 3.0 * m * m + 2.0 * m) * t2),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [WeightProfile; 7] = [
        WeightProfile::Tanh(1),
        WeightProfile::Tanh(2),
        WeightProfile::Tanh(3),
        WeightProfile::Sech(2),
        WeightProfile::Sech(4),
        WeightProfile::Sech(6),
        WeightProfile::Sech(8),
    ];

    #[test]
    fn saturated_tanh_matches_the_formula() {
        for k in 1..=3 {
            for x in [20.0 / k as f64, 7.5, -9.0, 40.0, -1e3] {
                let x: f64 = x;
                let t = (k as f64 * x).tanh();
                if (k as f64 * x).abs() >= TANH_SATURATION {
                    assert_eq!(t.abs(), 1.0);
                    let w = weight_eval(WeightProfile::Tanh(k), x);
                    assert_eq!((w.w, w.d1, w.d2, w.d3 == 0.0), (t, 0.0, 0.0, true));
                }
            }
        }
    }

    #[test]
    fn values_at_origin() {
        let t1 = weight_eval(WeightProfile::Tanh(1), 0.0);
        assert_eq!((t1.w, t1.d1, t1.d2, t1.d3), (0.0, 1.0, 0.0, -2.0));
        assert_eq!(weight_eval(WeightProfile::Tanh(2), 0.0).d1, 2.0);
        let s2 = weight_eval(WeightProfile::Sech(2), 0.0);
        assert_eq!((s2.w, s2.d1), (1.0, 0.0));
    }

    #[test]
    fn derivatives_match_central_differences() {
        // Richardson-extrapolated central differences at h and 2h; the
        // plain h = 1e-4 difference has an O(h^2 w^(5)) error of ~1e-6 for
        // tanh(3x), above the tolerance
        let h = 1e-4;
        for p in ALL {
            for i in -200..=200 {
                let x = i as f64 * 0.05;
                let v = weight_eval(p, x);
                let fd = |g: &dyn Fn(f64) -> f64| {
                    let c1 = (g(x + h) - g(x - h)) / (2.0 * h);
                    let c2 = (g(x + 2.0 * h) - g(x - 2.0 * h)) / (4.0 * h);
                    (4.0 * c1 - c2) / 3.0
                };
                let at = |y| weight_eval(p, y);
                assert!((fd(&|y| at(y).w) - v.d1).abs() < 1e-7, "{p:?} x={x}");
                assert!((fd(&|y| at(y).d1) - v.d2).abs() < 1e-7, "{p:?} x={x}");
                assert!((fd(&|y| at(y).d2) - v.d3).abs() < 1e-7, "{p:?} x={x}");
            }
        }
    }

    #[test]
    fn shape_invariants() {
        for i in -400..=400 {
            let x = i as f64 * 0.1;
            for k in 1..=3 {
                let v = weight_eval(WeightProfile::Tanh(k), x);
                assert!(v.d1 >= 0.0 && v.w.abs() <= 1.0);
            }
            for m in [2, 4, 6, 8] {
                let v = weight_eval(WeightProfile::Sech(m), x);
                assert!(v.w >= 0.0 && v.w <= 1.0);
                assert_eq!(v.w, weight_eval(WeightProfile::Sech(m), -x).w);
            }
        }
        assert!(weight_eval(WeightProfile::Sech(8), 800.0).w == 0.0);
    }
}
