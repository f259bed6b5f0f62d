//! Closed-form constants: the two extremal candidates for the sharp
//! Khinchin constant, the d = 4 moments of the extremizers, and the
//! normalizers of the Fourier moment formula.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, gamma, log_gamma};

const POLE_GUARD: f64 = 1e-9;

fn guard(x: f64) -> Result<f64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() < POLE_GUARD {
        return Err(Error::Pole(x));
    }
    Ok(x)
}

fn log_gamma_guarded(x: f64) -> Result<f64> {
    log_gamma(guard(x)?)
}

fn gamma_guarded(x: f64) -> Result<f64> {
    gamma(guard(x)?)
}

fn check_dim(d: u32) -> Result<f64> {
    if d == 0 {
        return domain("dimension must be at least 1");
    }
    Ok(d as f64)
}

/// Natural log of the two-point constant, `ln c_{d,2}(q)`.
pub fn log_two_point_constant(d: u32, q: f64) -> Result<f64> {
    let df = check_dim(d)?;
    if q == 0.0 {
        return domain("q = 0 is the limiting case and is not evaluated");
    }
    if !(q <= 2.0) || !(q > -(df - 1.0)) || (d == 1 && q <= 0.0) {
        return domain(format!("two-point constant needs -(d-1) < q <= 2, got d = {d}, q = {q}"));
    }
    let s = log_gamma_guarded(df / 2.0)? + log_gamma_guarded(df + q - 1.0)?
        - log_gamma_guarded((df + q) / 2.0)?
        - log_gamma_guarded(df + q / 2.0 - 1.0)?;
    Ok(-0.5 * LN_2 + s / q)
}

/// `c_{d,2}(q)`: the q-th moment constant attained by (ξ₁ + ξ₂)/√2.
pub fn two_point_constant(d: u32, q: f64) -> Result<f64> {
    Ok(log_two_point_constant(d, q)?.exp())
}

/// Natural log of the Gaussian constant, `ln c_{d,∞}(q)`.
pub fn log_gaussian_constant(d: u32, q: f64) -> Result<f64> {
    let df = check_dim(d)?;
    if q == 0.0 {
        return domain("q = 0 is the limiting case and is not evaluated");
    }
    if !(q > -df) {
        return domain(format!("Gaussian constant needs q > -d, got d = {d}, q = {q}"));
    }
    let s = log_gamma_guarded((df + q) / 2.0)? - log_gamma_guarded(df / 2.0)?;
    Ok(0.5 * (2.0 / df).ln() + s / q)
}

/// `c_{d,∞}(q)`: the q-th moment constant of the Gaussian limit.
pub fn gaussian_constant(d: u32, q: f64) -> Result<f64> {
    Ok(log_gaussian_constant(d, q)?.exp())
}

/// E|(ξ₁ + ξ₂)/√2|^{-p} for ξ uniform on S³, 0 < p < 3.
pub fn two_point_neg_moment(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 3.0) {
        return domain(format!("two-point moment needs 0 < p < 3, got {p}"));
    }
    Ok(2f64.powf(p / 2.0) * two_point_ratio(p)? * gamma_guarded(2.0 - p / 2.0)?)
}

/// E|G|^{-p} for a standard Gaussian vector in R⁴ scaled to E|G|² = 1, 0 < p < 4.
pub fn gaussian_neg_moment(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 4.0) {
        return domain(format!("Gaussian moment needs 0 < p < 4, got {p}"));
    }
    Ok(2f64.powf(p / 2.0) * gamma_guarded(2.0 - p / 2.0)?)
}

/// Γ(3-p) / (Γ(2-p/2)² Γ(3-p/2)), the ratio between the two-point and the
/// Gaussian term of the d = 4 Fourier integrals, 0 < p < 3.
pub fn two_point_ratio(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 3.0) {
        return domain(format!("two-point ratio needs 0 < p < 3, got {p}"));
    }
    let l = log_gamma_guarded(3.0 - p)?
        - 2.0 * log_gamma_guarded(2.0 - p / 2.0)?
        - log_gamma_guarded(3.0 - p / 2.0)?;
    Ok(l.exp())
}

/// d/dp ln of [`two_point_ratio`].
pub fn two_point_ratio_log_derivative(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 3.0) {
        return domain(format!("two-point ratio needs 0 < p < 3, got {p}"));
    }
    Ok(-digamma(3.0 - p)? + digamma(2.0 - p / 2.0)? + 0.5 * digamma(3.0 - p / 2.0)?)
}

/// Normalizing constants of the moment formula
/// E|Σ a_k ξ_k|^{-p} = radial ∫ Π jj(t|a_k|) t^{p-1} dt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizerSet {
    /// 2^{-p} π^{-d/2} Γ((d-p)/2)/Γ(p/2), the Fourier transform constant of |x|^{-p}.
    pub fourier: f64,
    /// `fourier` times the area of S^{d-1}.
    pub radial: f64,
    /// 1 / E|ξ₁|^{-p} for one coordinate of ξ; present only for 0 < p < 1.
    pub marginal: Option<f64>,
}

pub fn normalizers(p: f64, d: u32) -> Result<NormalizerSet> {
    let df = check_dim(d)?;
    if !(p > 0.0 && p < df) {
        return domain(format!("normalizers need 0 < p < d, got p = {p}, d = {d}"));
    }
    let lg_dp = log_gamma_guarded((df - p) / 2.0)?;
    let lg_p = log_gamma_guarded(p / 2.0)?;
    let lg_d = log_gamma_guarded(df / 2.0)?;
    let fourier = (-p * LN_2 - 0.5 * df * PI.ln() + lg_dp - lg_p).exp();
    let radial = ((1.0 - p) * LN_2 + lg_dp - lg_d - lg_p).exp();
    let marginal = if p < 1.0 {
        Some((0.5 * PI.ln() + lg_dp - log_gamma_guarded((1.0 - p) / 2.0)? - lg_d).exp())
    } else {
        None
    };
    Ok(NormalizerSet {
        fourier,
        radial,
        marginal,
    })
}

/// One moment E|Σ a_k ξ_k|^q of a weighted sum of independent vectors
/// uniform on S^{d-1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentQuery {
    pub d: u32,
    pub q: f64,
    pub coeffs: Vec<f64>,
}

impl MomentQuery {
    pub fn new(d: u32, q: f64, coeffs: &[f64]) -> Self {
        Self {
            d,
            q,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let df = check_dim(self.d)?;
        if !self.q.is_finite() || !(self.q > -(df - 1.0)) {
            return domain(format!("need q > -(d-1) = {}, got {}", 1.0 - df, self.q));
        }
        if self.coeffs.iter().any(|a| !a.is_finite()) {
            return domain("coefficients must be finite");
        }
        if !(self.norm() > 0.0) {
            return domain("at least one coefficient must be non-zero");
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Absolute values of the non-zero coefficients, largest first.
    pub fn magnitudes(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.coeffs.iter().map(|a| a.abs()).filter(|&a| a > 0.0).collect();
        m.sort_by(|a, b| b.total_cmp(a));
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proven,
    Conjectured,
}

/// Both candidates for the sharp constant, their minimum and whether the
/// minimum is known to be the sharp constant for this (d, q).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpConstant {
    pub d: u32,
    pub q: f64,
    pub two_point: f64,
    pub gaussian: f64,
    pub min: f64,
    pub status: Status,
}

/// Range of q for which the sharp constant is established in the literature.
pub fn proven_range(d: u32) -> (f64, f64) {
    match d {
        1 | 2 => (0.0, 2.0),
        3 => (-1.0, 2.0),
        4 => (-3.0, 2.0),
        _ => (-(d as f64 - 4.0), 2.0),
    }
}

fn proven(d: u32, q: f64) -> bool {
    let (lo, _) = proven_range(d);
    if q >= 2.0 {
        return true;
    }
    if d >= 5 {
        q >= lo
    } else {
        q > lo
    }
}

pub fn sharp_constant(d: u32, q: f64) -> Result<SharpConstant> {
    let status = if proven(d, q) {
        Status::Proven
    } else {
        Status::Conjectured
    };
    if q >= 2.0 {
        check_dim(d)?;
        return Ok(SharpConstant {
            d,
            q,
            two_point: 1.0,
            gaussian: 1.0,
            min: 1.0,
            status,
        });
    }
    let two_point = two_point_constant(d, q)?;
    let gaussian = gaussian_constant(d, q)?;
    Ok(SharpConstant {
        d,
        q,
        two_point,
        gaussian,
        min: two_point.min(gaussian),
        status,
    })
}
