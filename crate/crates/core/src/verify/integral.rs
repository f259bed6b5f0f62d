//! Verifiers for the integral inequalities: the sign of H and H̃ on their
//! regions, the closed-form envelope U against the Gaussian comparisons,
//! and the tangent tables built from the Riemann-sum upper bounds.

use std::f64::consts::PI;

use serde::Serialize;

use super::{
    eval_grid, linspace, logspace, product, tangent_margins, ConvexPair, GridConfig, ReportBuilder,
    VerificationReport,
};
use crate::constants::{two_point_ratio as ratio, two_point_ratio_log_derivative as ratio_log_derivative};
use crate::error::{Error, Result};
use crate::quad::{
    bessel_power_integral, certified_upper_bound, envelope_bound, gaussian_gap, gaussian_integral,
    two_point_gap, two_point_integral, BoundPlan, PowerParams, QuadratureConfig, Relaxation,
};
use crate::specfun::{digamma, log_gamma, EULER_GAMMA};

const CLIP: f64 = 1e-3;

fn pp(p: f64, s: f64) -> PowerParams {
    PowerParams { p, s }
}

/// H(p, s) > 0 on the two regions (a) 0 < p <= 2, s >= 2 and
/// (b) 0 < p <= 1/4, s >= 1.3, truncated at s = 12.
pub fn verify_h_regions(cfg: &GridConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let n = cfg.per_axis;
    let regions = [
        ("h_regions/a", 2.0 - CLIP, 2.0, "p in [0.001, 1.999], s in [2, 12]; p = 2 clipped since H(2, 2) = 0"),
        ("h_regions/b", 0.25, 1.3, "p in [0.001, 0.25], s in [1.3, 12]"),
    ];
    let mut out = Vec::new();
    for (id, p_max, s_min, region) in regions {
        let points = product(&logspace(CLIP, p_max, n), &logspace(s_min, 12.0, n));
        let margins = eval_grid(&points, |x| gaussian_gap(pp(x[0], x[1]), &cfg.quad))?;
        out.push(ReportBuilder::new(id, region).grid(&[n, n]).points(points, margins).finish());
    }
    Ok(out)
}

/// H̃(p, s) > 0 for 2 < p < 3, s >= 2, with H̃(p, 2) = 0 checked separately.
pub fn verify_h_tilde_region(cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let n = cfg.per_axis;
    let ps = linspace(2.0 + CLIP, 3.0 - CLIP, n);
    let mut points = product(&ps, &logspace(2.0 + CLIP, 12.0, n));
    points.push(vec![2.99, 2.01]);
    let margins = eval_grid(&points, |x| two_point_gap(pp(x[0], x[1]), &cfg.quad))?;
    let boundary = eval_grid(
        &ps.iter().map(|&p| vec![p]).collect::<Vec<_>>(),
        |x| Ok(two_point_gap(pp(x[0], 2.0), &cfg.quad)? / two_point_integral(pp(x[0], 2.0))?),
    )?;
    let worst = boundary.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ReportBuilder::new(
        "h_tilde_region",
        "p in [2.001, 2.999], s in [2.001, 12] plus (2.99, 2.01)",
    )
    .grid(&[n, n])
    .points(points, margins)
    .within("max relative |H~(p, 2)| on the p grid", worst, 0.0, 1e-7)
    .finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UCase {
    I,
    Ii,
    Iii,
    Tilde,
}

impl UCase {
    pub fn id(self) -> &'static str {
        match self {
            UCase::I => "u_less_g_i",
            UCase::Ii => "u_less_g_ii",
            UCase::Iii => "u_less_g_iii",
            UCase::Tilde => "u_less_g_tilde",
        }
    }
}

fn log_a() -> f64 {
    0.5 * (2.0 * PI).ln() + 0.25 * 15f64.ln()
}

fn a_factor(p: f64, s: f64) -> f64 {
    2f64.powf(-p / 2.0) * (1.5 * s - p) * (12.0 * s - (p / 2.0 + 2.0) * (p / 2.0 + 3.0)) / 144.0
}

const S_MAX: f64 = 40.0;

/// U < G on the three regions of the envelope lemma, together with the
/// monotonicity certificate (derivative bounds and corner value), or
/// U < G̃ for 2 < p < 3, s >= 8/3 with its two tangent checks.
pub fn verify_u_less_g(case: UCase, cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let n = cfg.fine_per_axis;
    if case == UCase::Tilde {
        return u_less_g_tilde(cfg);
    }
    let (pk, sk, dp_bound, ds_bound, corner_bound) = match case {
        UCase::I => (0.25, 1.7, -0.015, 0.34, 0.041),
        UCase::Ii => (0.8, 2.0, -0.02, 0.39, 0.049),
        _ => (2.0, 8.0 / 3.0, -0.029, 0.47, 0.032),
    };
    let points = product(&logspace(CLIP, pk, n), &logspace(sk, S_MAX, n));
    let margins = eval_grid(&points, |x| {
        let q = pp(x[0], x[1]);
        Ok(gaussian_integral(q)? - envelope_bound(q)?)
    })?;
    let la = log_a();
    let ak = a_factor(pk, sk).ln();
    let f = |p: f64, s: f64| -> Result<f64> {
        Ok(s * la + ak - (p / 2.0 + 2.0) * s.ln() + log_gamma(p / 2.0 + 2.0)?)
    };
    let dp = -0.5 * sk.ln() + 0.5 * digamma(pk / 2.0 + 2.0)?;
    let ds = la - (pk / 2.0 + 2.0) / sk;
    Ok(ReportBuilder::new(
        case.id(),
        format!("p in [0.001, {pk}], s in [{sk}, {S_MAX}]"),
    )
    .grid(&[n, n])
    .points(points, margins)
    .at_most("df/dp at the corner", dp, dp_bound)
    .at_least("df/ds at the corner", ds, ds_bound)
    .at_least("f at the corner", f(pk, sk)?, corner_bound)
    .finish())
}

fn u_less_g_tilde(cfg: &GridConfig) -> Result<VerificationReport> {
    let n = cfg.fine_per_axis;
    let points = product(&linspace(2.0 + CLIP, 3.0 - CLIP, n), &logspace(8.0 / 3.0, S_MAX, n));
    let margins = eval_grid(&points, |x| {
        let q = pp(x[0], x[1]);
        Ok(two_point_integral(q)? - envelope_bound(q)?)
    })?;
    let s: f64 = 8.0 / 3.0;
    let b = 2.0 * (-s * log_a()).exp() * s * s;
    let k = 0.88 * s * s;
    let pair = ConvexPair {
        lower: Box::new(move |p| {
            Ok(b * (16f64 / 3.0).powf(p / 2.0) / (4.0 - p) + (p / 2.0 + 2.0) * (p / 2.0 + 3.0) / 36.0)
        }),
        upper: Box::new(move |p| Ok(k * (ratio(p)? - 1.0) + 8.0 / 9.0)),
        upper_derivative: Some(Box::new(move |p| Ok(k * ratio(p)? * ratio_log_derivative(p)?))),
        breakpoints: vec![2.0, 2.5, 3.0],
        anchors: Some(vec![2.0, 2.5]),
    };
    let m = tangent_margins(&pair)?;
    Ok(ReportBuilder::new("u_less_g_tilde", "p in [2.001, 2.999], s in [8/3, 40]")
        .grid(&[n, n])
        .points(points, margins)
        .at_least("tangent at 2, gap at p = 2", m[0].0, 0.017)
        .at_least("tangent at 2, gap at p = 5/2", m[0].1, 0.076)
        .at_least("tangent at 5/2, gap at p = 5/2", m[1].0, 1.19)
        .at_least("tangent at 5/2, gap at p = 3", m[1].1, 3.77)
        .finish())
}

/// Tangent margins of a table in scaled units, with the printed lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentTable {
    pub index: Vec<usize>,
    pub breakpoints: Vec<f64>,
    pub scale: f64,
    pub left_bound: Vec<f64>,
    pub left: Vec<f64>,
    pub right_bound: Vec<f64>,
    pub right: Vec<f64>,
}

fn fill_table(
    rb: &mut ReportBuilder,
    index: Vec<usize>,
    breakpoints: Vec<f64>,
    scale: f64,
    bounds: (&[f64], &[f64]),
    margins: &[(f64, f64)],
) -> TangentTable {
    let left: Vec<f64> = margins.iter().map(|m| scale * m.0).collect();
    let right: Vec<f64> = margins.iter().map(|m| scale * m.1).collect();
    for (j, &i) in index.iter().enumerate() {
        rb.at_least(&format!("i = {i}, left end"), left[j], bounds.0[j]);
        rb.at_least(&format!("i = {i}, right end"), right[j], bounds.1[j]);
    }
    TangentTable {
        index,
        breakpoints,
        scale,
        left_bound: bounds.0.to_vec(),
        left,
        right_bound: bounds.1.to_vec(),
        right,
    }
}

const TABLE2_LEFT: [f64; 12] = [1., 5., 8., 9., 10., 12., 13., 14., 14., 15., 15., 15.];
const TABLE2_RIGHT: [f64; 12] = [4., 8., 9., 10., 11., 13., 14., 14., 15., 15., 15., 14.];
const TABLE3_LEFT: [f64; 6] = [0.7, 1., 3., 4., 5., 3.];
const TABLE3_RIGHT: [f64; 6] = [2., 3., 4., 3., 3., 2.];

/// F(p, 8/3) < e^{-p/6} G(p, 2) on [0.8, 2]: margins of the tangents to
/// ln Γ(p/2) over the logarithm of the Riemann-sum bound (m = 100), in
/// units of 10⁻³, plus a direct quadrature check of the inequality.
pub fn table2(cfg: &GridConfig) -> Result<(TangentTable, VerificationReport)> {
    cfg.validate()?;
    let s = 8.0 / 3.0;
    let lower = move |p: f64| -> Result<f64> {
        let b = certified_upper_bound(p, s, 100, BoundPlan::MonotoneToFive, Relaxation::Published)?;
        Ok(p / 6.0 + (1.0 - p) * std::f64::consts::LN_2 + b.bound.ln())
    };
    let breakpoints: Vec<f64> = (0..=12).map(|i| 0.8 + 0.1 * i as f64).collect();
    let pair = ConvexPair {
        lower: Box::new(lower),
        upper: Box::new(|p| log_gamma(p / 2.0)),
        upper_derivative: Some(Box::new(|p| Ok(0.5 * digamma(p / 2.0)?))),
        breakpoints: breakpoints.clone(),
        anchors: None,
    };
    let margins = tangent_margins(&pair)?;
    let mut rb = ReportBuilder::new("table2", "p in [0.8, 2], 12 tangents, m = 100");
    let table = fill_table(&mut rb, (0..12).collect(), breakpoints, 1e3, (&TABLE2_LEFT, &TABLE2_RIGHT), &margins);
    direct_check(&mut rb, &linspace(0.8, 2.0, cfg.per_axis), &cfg.quad, |p, q| {
        let f = bessel_power_integral(pp(p, s), q)?.value;
        Ok((-p / 6.0).exp() * gaussian_integral(pp(p, 2.0))? - f)
    })?;
    rb.grid(&[12, cfg.per_axis]);
    Ok((table, rb.finish()))
}

/// F(p, 1.3) < e^{2p/17} G(p, 1.7) on (0, 1/4]: tangent margins of
/// R(p) = c^p Γ(p/2 + 1) over L(p) = p·(four-piece bound, m = 200) in
/// units of 10⁻⁴, the tangent at 0 on (0, 0.02], and a quadrature check.
pub fn table3(cfg: &GridConfig) -> Result<(TangentTable, VerificationReport)> {
    cfg.validate()?;
    let s = 1.3;
    let log_c = 2.0 / 17.0 + 1.5 * std::f64::consts::LN_2 - 0.5 * 1.7f64.ln();
    let lower = move |p: f64| -> Result<f64> {
        let b = certified_upper_bound(p, s, 200, BoundPlan::SeriesMonotoneMidpoint, Relaxation::Published)?;
        Ok(p * b.bound)
    };
    let upper = move |p: f64| -> Result<f64> { Ok((p * log_c + log_gamma(p / 2.0 + 1.0)?).exp()) };
    let upper_derivative =
        move |p: f64| -> Result<f64> { Ok(upper(p)? * (log_c + 0.5 * digamma(p / 2.0 + 1.0)?)) };
    let breakpoints = vec![0.02, 0.05, 0.1, 0.15, 0.2, 0.23, 0.25];
    let pair = ConvexPair {
        lower: Box::new(lower),
        upper: Box::new(upper),
        upper_derivative: Some(Box::new(upper_derivative)),
        breakpoints: breakpoints.clone(),
        anchors: None,
    };
    let margins = tangent_margins(&pair)?;
    let mut rb = ReportBuilder::new("table3", "p in (0, 0.25], 6 tangents plus the tangent at 0, m = 200");
    let table = fill_table(&mut rb, (1..=6).collect(), breakpoints, 1e4, (&TABLE3_LEFT, &TABLE3_RIGHT), &margins);
    let slope0 = log_c - 0.5 * EULER_GAMMA;
    rb.at_least("tangent at 0 minus L at p = 0.02", 1.0 + slope0 * 0.02 - lower(0.02)?, 1e-5);
    direct_check(&mut rb, &logspace(CLIP, 0.25, cfg.per_axis), &cfg.quad, |p, q| {
        let f = bessel_power_integral(pp(p, s), q)?.value;
        Ok((2.0 * p / 17.0).exp() * gaussian_integral(pp(p, 1.7))? - f)
    })?;
    rb.grid(&[6, cfg.per_axis]);
    Ok((table, rb.finish()))
}

fn direct_check<F>(rb: &mut ReportBuilder, ps: &[f64], quad: &QuadratureConfig, f: F) -> Result<()>
where
    F: Fn(f64, &QuadratureConfig) -> Result<f64> + Sync,
{
    let points: Vec<Vec<f64>> = ps.iter().map(|&p| vec![p]).collect();
    let margins = eval_grid(&points, |x| f(x[0], quad))?;
    rb.points(points, margins);
    Ok(())
}

/// F(p, 8/3) < e^{-p/6} G̃(p, 2) on (2, 3): upper bounds on L = ln F from the
/// Riemann-sum bound against the tangents of R = ln(e^{-p/6} G̃(p, 2)) at 2
/// and 5/2, plus a quadrature check.
pub fn verify_interpolation_tilde(cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let s = 8.0 / 3.0;
    let l = |p: f64| -> Result<f64> {
        Ok(certified_upper_bound(p, s, 100, BoundPlan::MonotoneToFive, Relaxation::Tight)?.bound.ln())
    };
    let r = |p: f64| -> Result<f64> {
        Ok(-p / 6.0 + (p - 1.0) * std::f64::consts::LN_2 + log_gamma(p / 2.0)? + ratio(p)?.ln())
    };
    let r_prime = |p: f64| -> Result<f64> {
        Ok(-1.0 / 6.0 + std::f64::consts::LN_2 + 0.5 * digamma(p / 2.0)? + ratio_log_derivative(p)?)
    };
    let r1 = |p: f64| -> Result<f64> { Ok(r(2.0)? + r_prime(2.0)? * (p - 2.0)) };
    let r2 = |p: f64| -> Result<f64> { Ok(r(2.5)? + r_prime(2.5)? * (p - 2.5)) };
    let mut rb = ReportBuilder::new("interpolation_tilde", "p in [2, 3], m = 100");
    rb.at_most("L(2)", l(2.0)?, 0.35)
        .at_most("L(5/2)", l(2.5)?, 0.56)
        .at_most("L(3)", l(3.0)?, 0.96)
        .at_least("r1(2)", r1(2.0)?, 0.359)
        .at_least("r1(5/2)", r1(2.5)?, 0.58)
        .at_least("r2(3)", r2(3.0)?, 1.48)
        .at_least("r1(2) - L(2)", r1(2.0)? - l(2.0)?, 0.0)
        .at_least("r1(5/2) - L(5/2)", r1(2.5)? - l(2.5)?, 0.0)
        .at_least("r2(5/2) - L(5/2)", r2(2.5)? - l(2.5)?, 0.0)
        .at_least("r2(3) - L(3)", r2(3.0)? - l(3.0)?, 0.0);
    direct_check(&mut rb, &linspace(2.0 + CLIP, 3.0 - CLIP, cfg.per_axis), &cfg.quad, |p, q| {
        let f = bessel_power_integral(pp(p, s), q)?.value;
        Ok((-p / 6.0).exp() * two_point_integral(pp(p, 2.0))? - f)
    })?;
    rb.grid(&[cfg.per_axis]);
    Ok(rb.finish())
}

/// One point of a sign chart of H (p < 2) or H̃ (p > 2).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartPoint {
    pub p: f64,
    pub s: f64,
    /// None where the integral diverges or the quadrature fails.
    pub value: Option<f64>,
    pub note: Option<String>,
}

/// Long-format chart of H (or H̃ for p > 2) over a box, with no pass/fail
/// claim: the inequality is known to fail in parts of the plane.
pub fn h_sign_chart(
    p_range: (f64, f64),
    s_range: (f64, f64),
    n: usize,
    quad: &QuadratureConfig,
) -> Result<Vec<ChartPoint>> {
    if n < 2 {
        return Err(Error::Domain("chart needs at least 2 points per axis".into()));
    }
    let points = product(&linspace(p_range.0, p_range.1, n), &linspace(s_range.0, s_range.1, n));
    let values: Vec<Result<f64>> = {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|x| {
                let q = pp(x[0], x[1]);
                if x[0] > 2.0 {
                    two_point_gap(q, quad)
                } else {
                    gaussian_gap(q, quad)
                }
            })
            .collect()
    };
    Ok(points
        .into_iter()
        .zip(values)
        .map(|(x, v)| match v {
            Ok(v) => ChartPoint { p: x[0], s: x[1], value: Some(v), note: None },
            Err(e) => ChartPoint { p: x[0], s: x[1], value: None, note: Some(e.to_string()) },
        })
        .collect())
}
