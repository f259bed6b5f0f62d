//! Normalized Bessel functions jj_ν(t) = 2^ν Γ(ν+1) t^{-ν} J_ν(t).
//!
//! The power series is used below [`SERIES_CROSSOVER`]; above it the value
//! comes from `J_ν` computed by the msun-derived routines in `libm` (integer
//! orders) or the closed form of spherical Bessel functions (half-integer
//! orders).

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{gamma, SeriesConfig};
use crate::error::{domain, Error, Result};

pub const SERIES_CROSSOVER: f64 = 12.0;

fn integer_order(nu: f64) -> Option<i32> {
    let r = nu.round();
    if (nu - r).abs() < 1e-12 && r >= 0.0 && r < 64.0 {
        Some(r as i32)
    } else {
        None
    }
}

fn half_integer_order(nu: f64) -> Option<i32> {
    let n = nu - 0.5;
    let r = n.round();
    if (n - r).abs() < 1e-12 && r >= -1.0 && r < 64.0 {
        Some(r as i32)
    } else {
        None
    }
}

fn jj_series(nu: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let x = -0.25 * t * t;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=cfg.max_terms {
        let kf = k as f64;
        term *= x / (kf * (nu + kf));
        sum += term;
        let past_peak = kf * kf > -x;
        if past_peak && term.abs() <= 1e-3 * cfg.rel_tol * sum.abs().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "normalized Bessel series",
        terms: cfg.max_terms,
    })
}

/// Spherical Bessel j_n(t) for n >= -1 by upward recurrence (stable for t > n).
fn spherical_j(n: i32, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let jm1 = c / t;
    if n == -1 {
        return jm1;
    }
    let mut prev = jm1;
    let mut cur = s / t;
    for k in 0..n {
        let next = (2 * k + 1) as f64 / t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Bessel function of the first kind for the orders this crate supports:
/// any ν > -1 for t below the crossover, integer and half-integer ν above it.
pub fn bessel_j(nu: f64, t: f64) -> Result<f64> {
    if t < SERIES_CROSSOVER {
        let scale = gamma(nu + 1.0)? * 2f64.powf(nu);
        return Ok(jj(nu, t, &SeriesConfig::default())? * t.powf(nu) / scale);
    }
    if let Some(n) = integer_order(nu) {
        return Ok(match n {
            0 => libm::j0(t),
            1 => libm::j1(t),
            _ => libm::jn(n, t),
        });
    }
    if let Some(n) = half_integer_order(nu) {
        return Ok((2.0 * t / PI).sqrt() * spherical_j(n, t));
    }
    Err(Error::Unsupported(format!(
        "Bessel order {nu} above t = {SERIES_CROSSOVER} (integer or half-integer orders only)"
    )))
}

/// Normalized Bessel function jj_ν(t), even in t, with jj_ν(0) = 1.
pub fn jj(nu: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(nu > -1.0) {
        return domain(format!("jj requires nu > -1, got {nu}"));
    }
    if t.is_nan() {
        return domain("jj of NaN");
    }
    let t = t.abs();
    if t < SERIES_CROSSOVER {
        return jj_series(nu, t, cfg);
    }
    let j = bessel_j(nu, t)?;
    let scale = gamma(nu + 1.0)? * (2.0 / t).powf(nu);
    Ok(scale * j)
}

/// d/dt jj_ν(t) = -t/(2(ν+1)) jj_{ν+1}(t).
pub fn jj_derivative(nu: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    Ok(-t / (2.0 * (nu + 1.0)) * jj(nu + 1.0, t, cfg)?)
}

fn bisect_zero(nu: f64, mut lo: f64, mut hi: f64, cfg: &SeriesConfig) -> Result<f64> {
    let mut flo = jj(nu, lo, cfg)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = jj(nu, mid, cfg)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn scan_zeros(nu: f64, upto: f64) -> Result<Vec<f64>> {
    let cfg = SeriesConfig::default();
    let h = 0.25;
    let mut zeros = Vec::new();
    let mut a = h;
    let mut fa = jj(nu, a, &cfg)?;
    while a < upto {
        let b = a + h;
        let fb = jj(nu, b, &cfg)?;
        if fa == 0.0 {
            zeros.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            zeros.push(bisect_zero(nu, a, b, &cfg)?);
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

const CACHED_J1_RANGE: f64 = 4000.0;

/// Positive zeros of jj_ν (equivalently of J_ν) up to `upto`, located by
/// bisection from sign changes on a 0.25 grid. Zeros of J_1 are cached.
pub fn jj_zeros(nu: f64, upto: f64) -> Result<Vec<f64>> {
    if (nu - 1.0).abs() < 1e-15 && upto <= CACHED_J1_RANGE {
        static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
        let all = CACHE.get_or_init(|| scan_zeros(1.0, CACHED_J1_RANGE).expect("J1 zeros"));
        return Ok(all.iter().copied().take_while(|&z| z <= upto).collect());
    }
    scan_zeros(nu, upto)
}

/// Coefficients a_k of the modulus expansion
/// J_ν² + Y_ν² ~ (2/(πt)) Σ a_k (2t)^{-2k}, with a_0 = 1.
pub fn bessel_modulus_series(nu: f64, nterms: usize) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut out = Vec::with_capacity(nterms);
    let mut a = 1.0;
    out.push(a);
    for k in 1..nterms {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= odd / (2.0 * kf) * (mu - odd * odd);
        out.push(a);
    }
    out
}

fn phase_coeffs(nu: f64) -> [f64; 4] {
    let mu = 4.0 * nu * nu;
    let m1 = mu - 1.0;
    [
        m1 / 8.0,
        m1 * (mu - 25.0) / (6.0 * 64.0),
        m1 * (mu * mu - 114.0 * mu + 1073.0) / (5.0 * 1024.0),
        m1 * (5.0 * mu * mu * mu - 1535.0 * mu * mu + 54703.0 * mu - 375733.0) / (14.0 * 16384.0),
    ]
}

/// Asymptotic phase θ_ν(t) with J_ν = M_ν cos θ_ν, Y_ν = M_ν sin θ_ν
/// (large t only).
pub fn bessel_phase(nu: f64, t: f64) -> f64 {
    let b = phase_coeffs(nu);
    let r = 1.0 / t;
    let r2 = r * r;
    let corr = r * (b[0] + r2 * (b[1] + r2 * (b[2] + r2 * b[3])));
    t - (0.5 * nu + 0.25) * PI + corr
}

/// Derivative of [`bessel_phase`] in t.
pub fn bessel_phase_derivative(nu: f64, t: f64) -> f64 {
    let b = phase_coeffs(nu);
    let r2 = 1.0 / (t * t);
    1.0 - r2 * (b[0] + r2 * (3.0 * b[1] + r2 * (5.0 * b[2] + r2 * 7.0 * b[3])))
}
