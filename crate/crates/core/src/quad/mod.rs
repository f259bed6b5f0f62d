//! Fourier-side integrals of the normalized Bessel function jj_1 and the
//! quantities built from them.
//!
//! For s > 0 and 0 < p < 3s/2 the central integral is
//! `∫_0^∞ |jj_1(t)|^s t^{p-1} dt`; its Gaussian comparison is
//! `∫_0^∞ e^{-s t²/8} t^{p-1} dt`, and the two-point comparison rescales the
//! latter by the ratio of the two-point moment to the Gaussian one.

mod arch;
mod certified;
mod gk;
mod moment;

use serde::{Deserialize, Serialize};

use crate::constants::two_point_ratio;
use crate::error::{domain, Result};
use crate::specfun::gamma;

pub(crate) use arch::envelope_constant;
pub use certified::{certified_upper_bound, BoundPlan, CertifiedBound, Relaxation, Scheme, Segment};
pub use moment::{negative_moment, product_moment, MomentMethod, MomentValue};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Smallest t at which the asymptotic tail takes over (rounded up to a zero).
    pub tail_cut: f64,
    /// Panel budget per adaptive sub-integral.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            tail_cut: 150.0,
            max_panels: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("tolerances must be positive");
        }
        if !(self.tail_cut >= 4.0) {
            return domain(format!("tail_cut must be at least 4, got {}", self.tail_cut));
        }
        if self.max_panels == 0 {
            return domain("max_panels must be positive");
        }
        Ok(())
    }
}

/// Value of a numerically computed integral with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error (quadrature plus asymptotic tail).
    pub error: f64,
    /// Point where the asymptotic tail takes over.
    pub cut: f64,
    /// Contribution of [cut, ∞).
    pub tail: f64,
    /// Envelope bound on |tail|.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub p: f64,
    pub s: f64,
}

/// `∫_0^∞ |jj_1(t)|^s t^{p-1} dt`, finite exactly when 0 < p < 3s/2.
pub fn bessel_power_integral(params: PowerParams, cfg: &QuadratureConfig) -> Result<Integral> {
    let r = arch::power_integral(1.0, arch::Power::Abs(params.s), params.p, cfg)?;
    Ok(Integral {
        value: r.value,
        error: r.error,
        cut: r.cut,
        tail: r.tail.value,
        tail_bound: r.tail.bound,
    })
}

fn check_ps(params: PowerParams) -> Result<()> {
    if !(params.p > 0.0 && params.s > 0.0) {
        return domain(format!("need p > 0 and s > 0, got {params:?}"));
    }
    Ok(())
}

/// `∫_0^∞ e^{-s t²/8} t^{p-1} dt = s^{-p/2} 2^{3p/2-1} Γ(p/2)`.
pub fn gaussian_integral(params: PowerParams) -> Result<f64> {
    check_ps(params)?;
    let PowerParams { p, s } = params;
    Ok(s.powf(-p / 2.0) * 2f64.powf(1.5 * p - 1.0) * gamma(p / 2.0)?)
}

/// Gaussian integral minus the Bessel power integral.
pub fn gaussian_gap(params: PowerParams, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(gaussian_integral(params)? - bessel_power_integral(params, cfg)?.value)
}

/// Closed-form upper bound for the Bessel power integral combining the
/// envelope tail with the quartic-exponential bound near the origin,
/// `4^p a^{-s}/(3s/2 - p) + 2^{3p/2-1} s^{-p/2}(Γ(p/2) - Γ(p/2+2)/(6s) + Γ(p/2+4)/(72 s²))`
/// with `a = (2π)^{1/2} 15^{1/4}`.
pub fn envelope_bound(params: PowerParams) -> Result<f64> {
    check_ps(params)?;
    let PowerParams { p, s } = params;
    if !(p < 1.5 * s) {
        return domain(format!("envelope bound needs p < 3s/2, got {params:?}"));
    }
    let a_pow = (2.0 * std::f64::consts::PI * 15f64.sqrt()).powf(-s / 2.0);
    let first = 4f64.powf(p) * a_pow / (1.5 * s - p);
    let g = gamma(p / 2.0)? - gamma(p / 2.0 + 2.0)? / (6.0 * s) + gamma(p / 2.0 + 4.0)? / (72.0 * s * s);
    Ok(first + 2f64.powf(1.5 * p - 1.0) * s.powf(-p / 2.0) * g)
}

/// Gaussian integral scaled by the two-point ratio, for 0 < p < 3.
pub fn two_point_integral(params: PowerParams) -> Result<f64> {
    Ok(gaussian_integral(params)? * two_point_ratio(params.p)?)
}

/// Two-point integral minus the Bessel power integral; vanishes at s = 2.
pub fn two_point_gap(params: PowerParams, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(two_point_integral(params)? - bessel_power_integral(params, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{normalizers, two_point_neg_moment};

    fn pp(p: f64, s: f64) -> PowerParams {
        PowerParams { p, s }
    }

    #[test]
    fn fourier_formula_reproduces_two_point_moment() {
        for &p in &[0.5, 1.0, 1.5, 2.0, 2.5] {
            let f = bessel_power_integral(pp(p, 2.0), &QuadratureConfig::default()).unwrap();
            let kappa = normalizers(p, 4).unwrap().radial;
            let lhs = kappa * f.value * 2f64.powf(p / 2.0);
            assert!((lhs - two_point_neg_moment(p).unwrap()).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn two_point_gap_vanishes_at_two() {
        for &p in &[2.1, 2.5, 2.9] {
            let h = two_point_gap(pp(p, 2.0), &QuadratureConfig::default()).unwrap();
            assert!(h.abs() < 1e-8, "p = {p}: {h}");
        }
    }

    #[test]
    fn gaussian_integral_matches_quadrature() {
        for &(p, s) in &[(0.7, 2.0), (2.0, 3.3), (1.2, 12.0)] {
            let direct = gk::adaptive(
                &|t: f64| if t == 0.0 { 0.0 } else { (-s * t * t / 8.0).exp() * t.powf(p - 1.0) },
                0.0,
                60.0,
                1e-13,
                1e-13,
                5000,
            );
            let closed = gaussian_integral(pp(p, s)).unwrap();
            assert!((direct.value - closed).abs() < 1e-10, "{p} {s}");
        }
    }

    #[test]
    fn envelope_bound_dominates() {
        for &(p, s) in &[(0.5, 2.0), (1.0, 3.0), (2.0, 8.0 / 3.0), (0.2, 1.7)] {
            let f = bessel_power_integral(pp(p, s), &QuadratureConfig::default()).unwrap().value;
            assert!(envelope_bound(pp(p, s)).unwrap() > f, "{p} {s}");
        }
    }

    #[test]
    fn gap_at_known_point() {
        // p = 2, s = 2: both integrals equal 2
        let f = bessel_power_integral(pp(2.0, 2.0), &QuadratureConfig::default()).unwrap();
        assert!((f.value - 2.0).abs() < 1e-9);
        assert!((gaussian_integral(pp(2.0, 2.0)).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_and_config_errors() {
        let cfg = QuadratureConfig::default();
        assert!(bessel_power_integral(pp(1.9, 1.05), &cfg).is_err());
        let bad = QuadratureConfig { tail_cut: 2.0, ..cfg };
        assert!(bessel_power_integral(pp(1.0, 2.0), &bad).is_err());
    }
}
