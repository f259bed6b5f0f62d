//! Negative moments E|Σ a_k ξ_k|^{-p} of weighted sums of independent
//! uniform vectors on S^{d-1}, computed from the Fourier formula
//! `radial ∫_0^∞ Π_k jj_{d/2-1}(|a_k| t) t^{p-1} dt`.

use std::f64::consts::PI;

use serde::Serialize;

use super::arch::{power_integral, Power};
use super::gk::adaptive;
use super::{envelope_constant, Integral, QuadratureConfig};
use crate::constants::{normalizers, MomentQuery};
use crate::error::{domain, Error, Result};
use crate::specfun::{hyp2f1, jj, jj_zeros, SeriesConfig};

// Validated magnitudes and the order p = -q of a negative moment.
fn negative_order(query: &MomentQuery) -> Result<(Vec<f64>, f64)> {
    query.validate()?;
    if query.d < 2 {
        return domain("the Fourier moment formula needs d >= 2");
    }
    let p = -query.q;
    if !(p > 0.0 && p < query.d as f64) {
        return domain(format!("need -d < q < 0, got q = {}", query.q));
    }
    Ok((query.magnitudes(), p))
}

/// E|Σ a_k ξ_k|^q for q = -p < 0 by quadrature. Requires p < n(d-1)/2 with n the number
/// of non-zero coefficients. Equal magnitudes reduce to a single power of
/// jj and use the asymptotic tail; otherwise the tail past the cut is
/// bounded by the product of per-factor envelopes.
pub fn product_moment(query: &MomentQuery, cfg: &QuadratureConfig) -> Result<Integral> {
    let (mags, p) = negative_order(query)?;
    cfg.validate()?;
    let d = query.d as f64;
    let n = mags.len();
    let limit = n as f64 * (d - 1.0) / 2.0;
    if !(p < limit) {
        return Err(Error::Divergent(format!(
            "the Fourier integral converges absolutely only for p < n(d-1)/2 = {limit}"
        )));
    }
    let kappa = normalizers(p, query.d)?.radial;
    let nu = d / 2.0 - 1.0;
    let (amax, amin) = (mags[0], mags[n - 1]);
    if amax - amin <= 1e-12 * amax {
        let inner = QuadratureConfig {
            abs_tol: cfg.abs_tol / kappa * amax.powf(p),
            ..*cfg
        };
        let r = power_integral(nu, Power::Signed(n as u32), p, &inner)?;
        let scale = kappa * amax.powf(-p);
        return Ok(Integral {
            value: scale * r.value,
            error: scale * r.error,
            cut: r.cut / amax,
            tail: scale * r.tail.value,
            tail_bound: scale * r.tail.bound,
        });
    }
    product_quadrature(nu, &mags, p, kappa, cfg)
}

// Envelope bound on ∫_T^∞ Π |jj(a_k t)| t^{p-1} dt, bounding each factor by
// either 1 or its power-law envelope.
fn product_tail_bound(nu: f64, mags: &[f64], p: f64, cut: f64) -> f64 {
    let decay = nu + 0.5;
    let mut coef = 1.0;
    let mut used = 0.0;
    for &a in mags {
        if let Ok(c) = envelope_constant(nu, a * cut) {
            let at_cut = c * (a * cut).powf(-decay);
            if at_cut < 1.0 {
                coef *= c * a.powf(-decay);
                used += decay;
            }
        }
    }
    if used <= p {
        return f64::INFINITY;
    }
    coef * cut.powf(p - used) / (used - p)
}

const MAX_TOTAL_PANELS: usize = 400_000;

fn product_quadrature(
    nu: f64,
    mags: &[f64],
    p: f64,
    kappa: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let scfg = SeriesConfig::default();
    jj(nu, 2.0 * crate::specfun::SERIES_CROSSOVER, &scfg)?;
    let amax = mags[0];
    let tol = cfg.abs_tol / kappa;
    let width = 0.5 * PI / amax;
    let mut cut = cfg.tail_cut / amax;
    let mut bound = product_tail_bound(nu, mags, p, cut);
    // past the panel budget the tail bound is carried in the error and the
    // final check (which also admits rel_tol) decides
    while bound > 0.1 * tol && 2.0 * cut / width <= MAX_TOTAL_PANELS as f64 {
        cut *= 2.0;
        bound = product_tail_bound(nu, mags, p, cut);
    }
    let g = |t: f64| {
        mags.iter()
            .map(|&a| jj(nu, a * t, &scfg).unwrap_or(f64::NAN))
            .product::<f64>()
    };
    let z1 = jj_zeros(nu, 20.0)?[0];
    let c = 0.5 * z1 / amax;
    let panels = ((cut - c) / width).ceil().max(1.0) as usize;
    let piece_tol = 0.5 * tol / (panels + 1) as f64;
    let head = |t: f64| if t == 0.0 { 0.0 } else { (g(t) - 1.0) * t.powf(p - 1.0) };
    let r = adaptive(&head, 0.0, c, piece_tol, 1e-15, cfg.max_panels);
    let mut value = r.value + c.powf(p) / p;
    let mut error = r.error;
    let h = (cut - c) / panels as f64;
    let body = |t: f64| g(t) * t.powf(p - 1.0);
    for i in 0..panels {
        let a = c + i as f64 * h;
        let r = adaptive(&body, a, a + h, piece_tol, 1e-15, cfg.max_panels);
        value += r.value;
        error += r.error;
    }
    if !value.is_finite() {
        return Err(Error::Domain("integrand evaluation failed".into()));
    }
    error += bound;
    let total = kappa * value;
    let total_err = kappa * error;
    let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
    if total_err > target {
        return Err(Error::ToleranceNotMet {
            requested: target,
            achieved: total_err,
        });
    }
    Ok(Integral {
        value: total,
        error: total_err,
        cut,
        tail: 0.0,
        tail_bound: kappa * bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    /// A single non-zero coefficient.
    Exact,
    /// Two non-zero coefficients, through 2F1.
    Hypergeometric,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub value: f64,
    pub error: f64,
    pub method: MomentMethod,
}

/// E|Σ a_k ξ_k|^{-p} choosing the cheapest exact route: closed form for one
/// coefficient, 2F1 for two, quadrature otherwise.
pub fn negative_moment(query: &MomentQuery, cfg: &QuadratureConfig) -> Result<MomentValue> {
    let (mags, p) = negative_order(query)?;
    let d = query.d as f64;
    match mags.len() {
        1 => Ok(MomentValue {
            value: mags[0].powf(-p),
            error: 0.0,
            method: MomentMethod::Exact,
        }),
        2 => {
            let t = (mags[1] / mags[0]).powi(2);
            if t == 1.0 && !(p < d - 1.0) {
                return Err(Error::Divergent(format!(
                    "E|a(ξ1 + ξ2)|^(-p) is infinite for p >= d - 1 = {}",
                    d - 1.0
                )));
            }
            let f = hyp2f1(p / 2.0, (p - d + 2.0) / 2.0, d / 2.0, t, &SeriesConfig::default())?;
            let value = mags[0].powf(-p) * f;
            Ok(MomentValue {
                value,
                error: 1e-13 * value.abs(),
                method: MomentMethod::Hypergeometric,
            })
        }
        _ => {
            let r = product_moment(query, cfg)?;
            Ok(MomentValue {
                value: r.value,
                error: r.error,
                method: MomentMethod::Quadrature,
            })
        }
    }
}
