//! The phase transition between the two candidate constants: the root
//! q_d* of c_{d,2}(q) = c_{d,∞}(q), the auxiliary function h̃_d and its
//! convexity and monotonicity claims, and the large-d behaviour of q_d*.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::constants::{log_gaussian_constant, log_two_point_constant, two_point_constant, gaussian_constant};
use crate::error::{domain, Error, Result};
use crate::specfun::{digamma, log_gamma, trigamma};
use crate::verify::{GridConfig, ReportBuilder, VerificationReport};

/// Asymptotic rate (1 − ln 2)/2 of ln α_d in d.
pub const ASYMPTOTIC_RATE: f64 = 0.153_426_409_720_027_3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseTransitionResult {
    pub d: u32,
    pub q_star: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

/// ln c_{d,2}(q) − ln c_{d,∞}(q).
pub fn log_constant_gap(d: u32, q: f64) -> Result<f64> {
    Ok(log_two_point_constant(d, q)? - log_gaussian_constant(d, q)?)
}

/// h_d(q) = q (ln c_{d,2}(q) − ln c_{d,∞}(q)).
pub fn h(d: u32, q: f64) -> Result<f64> {
    Ok(q * log_constant_gap(d, q)?)
}

fn check_h_tilde(d: u32, x: f64) -> Result<f64> {
    if d < 2 {
        return domain(format!("h~ needs d >= 2, got {d}"));
    }
    let y = (d as f64 - 1.0) / 2.0;
    if !(x > 0.0 && x <= y) {
        return domain(format!("h~_{d} needs 0 < x <= {y}, got {x}"));
    }
    Ok(y)
}

/// h̃_d(x) = h_d(2x + 1 − d), in log-gamma form.
pub fn h_tilde(d: u32, x: f64) -> Result<f64> {
    let y = check_h_tilde(d, x)?;
    let df = d as f64;
    let konst = (df - 2.0) * LN_2 + 2.0 * log_gamma(df / 2.0)? - 0.5 * PI.ln() - y * df.ln();
    Ok(x * df.ln() + log_gamma(x)? - log_gamma(x + 0.5)? - log_gamma(x + y)? + konst)
}

pub fn h_tilde_derivative(d: u32, x: f64) -> Result<f64> {
    let y = check_h_tilde(d, x)?;
    Ok((d as f64).ln() + digamma(x)? - digamma(x + 0.5)? - digamma(x + y)?)
}

pub fn h_tilde_second_derivative(d: u32, x: f64) -> Result<f64> {
    let y = check_h_tilde(d, x)?;
    Ok(trigamma(x)? - trigamma(x + 0.5)? - trigamma(x + y)?)
}

const ZERO_WINDOW: f64 = 1e-6;
const STEP: f64 = 0.01;
const RIGHT_MARGIN: f64 = 1e-3;

fn scan_points(d: u32) -> Vec<f64> {
    let df = d as f64;
    let hi = 2.0 - RIGHT_MARGIN;
    let mut pts = Vec::new();
    if d == 1 {
        pts.push(ZERO_WINDOW);
    } else {
        // near the left end the root approaches -(d-1) exponentially fast in d
        let lo = -(df - 1.0);
        let n = 200;
        let (a, b) = (1e-8f64.ln(), 0.5f64.ln());
        for i in 0..n {
            let x = (a + (b - a) * i as f64 / n as f64).exp();
            pts.push(lo + 2.0 * x);
        }
        let mut q = lo + 1.0;
        while q < -ZERO_WINDOW {
            pts.push(q);
            q += STEP;
        }
        pts.push(-ZERO_WINDOW);
        pts.push(ZERO_WINDOW);
    }
    let mut q = (ZERO_WINDOW / STEP).ceil() * STEP;
    while q < hi {
        if q > ZERO_WINDOW {
            pts.push(q);
        }
        q += STEP;
    }
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// The unique root q_d* of c_{d,2} = c_{d,∞} on (−(d−1), 2), by a sign scan
/// followed by bisection to `tol`. For d = 1 the range is (0, 2).
pub fn q_star(d: u32, tol: f64) -> Result<PhaseTransitionResult> {
    if d == 0 {
        return domain("dimension must be at least 1");
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let pts = scan_points(d);
    let vals: Vec<f64> = pts.iter().map(|&q| log_constant_gap(d, q)).collect::<Result<_>>()?;
    let mut changes = Vec::new();
    for i in 1..pts.len() {
        if (vals[i - 1] < 0.0) != (vals[i] < 0.0) {
            changes.push(i);
        }
    }
    let i = match changes.len() {
        0 => return Err(Error::NoSignChange(format!("d = {d}: no sign change of c_2 - c_inf"))),
        1 => changes[0],
        k => return Err(Error::NotUnique(format!("d = {d}: {k} sign changes of c_2 - c_inf"))),
    };
    let bracket = (pts[i - 1], pts[i]);
    let (mut lo, mut hi) = bracket;
    let lo_negative = vals[i - 1] < 0.0;
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if (log_constant_gap(d, mid)? < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let residual = (two_point_constant(d, q)? - gaussian_constant(d, q)?).abs();
    Ok(PhaseTransitionResult { d, q_star: q, bracket, residual, iterations })
}

/// Roots for several dimensions, computed in parallel, in input order.
pub fn table1(ds: &[u32], tol: f64) -> Result<Vec<PhaseTransitionResult>> {
    use rayon::prelude::*;
    ds.par_iter().map(|&d| q_star(d, tol)).collect()
}

/// Grid and spot checks of the three claims on h̃_d behind uniqueness of
/// q_d* for d >= 5, plus h_d'(0) > 0 and q_d* ∈ (−(d−1), −(d−2)).
pub fn verify_appendix_claims(d: u32, cfg: &GridConfig) -> Result<VerificationReport> {
    if d < 5 {
        return domain(format!("the appendix claims need d >= 5, got {d}"));
    }
    let n = cfg.fine_per_axis.max(2);
    let df = d as f64;
    let y = (df - 1.0) / 2.0;
    let mut rb = ReportBuilder::new(
        "appendix_claims",
        format!("d = {d}: x in (0, 1) and (1, {y})"),
    );
    rb.grid(&[n, n]);

    // convexity on (0, 1)
    for i in 0..n {
        let x = 1e-3 + (1.0 - 2e-3) * i as f64 / (n - 1) as f64;
        rb.point(vec![1.0, x], h_tilde_second_derivative(d, x)? - 0.06);
    }
    let floor = trigamma(1.0)? - trigamma(1.5)? - trigamma(2.0)?;
    rb.within("convexity floor = 5 - pi^2/2", floor, 5.0 - PI * PI / 2.0, 1e-12);
    rb.at_least("convexity floor", floor, 0.06);

    // increase on (1, (d - 1)/2)
    for i in 0..n {
        let x = 1.0 + 1e-3 + (y - 1.0 - 2e-3) * i as f64 / (n - 1) as f64;
        rb.point(vec![2.0, x], h_tilde_derivative(d, x)?);
    }
    let crude = (1.0 + 1.0 / 2.14f64).ln() + 1.0 / 4.28 - (digamma(1.5)? - digamma(1.0)?);
    rb.at_least("derivative bound on (1, 1.07)", crude, 0.003);
    let elementary = |x: f64| (1.0 + 0.5 / x).ln() + 0.25 / x - (1.0 / x - 1.0 / (2.0 * x + 1.0));
    let (a, b) = (1.07f64.ln(), 1e4f64.ln());
    let elem_min = (0..n)
        .map(|i| elementary((a + (b - a) * i as f64 / (n - 1) as f64).exp()))
        .fold(f64::INFINITY, f64::min);
    rb.at_least("elementary derivative bound on [1.07, 1e4]", elem_min, 0.0);

    // negativity at 1/2
    let u = df / 2.0;
    let value = h_tilde(d, 0.5)?;
    let closed = (df - 2.0) * LN_2 + (1.0 - u) * df.ln() + log_gamma(u)?;
    let stirling = |u: f64| 0.5 * (2.0 * PI).ln() + (u - 1.0) * LN_2 - u + 1.0 / 30.0 + 0.5 * u.ln();
    rb.at_most("h~(1/2)", value, 0.0);
    rb.within("h~(1/2) closed form", value, closed, 1e-9);
    rb.at_least("Stirling majorant minus h~(1/2)", stirling(u) - value, 0.0);
    rb.at_most("majorant derivative at 5/2", LN_2 - 1.0 + 1.0 / 5.0, -0.1);
    rb.at_most("majorant at 5/2", stirling(2.5), -0.04);

    rb.within("h~((d-1)/2) = 0", h_tilde(d, y)?, 0.0, 1e-9);
    let eps = 1e-4;
    rb.at_least("h_d'(0) from the left", h(d, -eps)? / -eps, 0.0);
    rb.at_least("h_d'(0) from the right", h(d, eps)? / eps, 0.0);
    let root = q_star(d, 1e-12)?;
    rb.at_least("q* + (d - 1)", root.q_star + (df - 1.0), 0.0);
    rb.at_most("q* + (d - 2)", root.q_star + (df - 2.0), 0.0);
    Ok(rb.finish())
}

/// Least-squares fit of ln α_d − ln d = slope·d + intercept, α_d = (q_d* + d − 1)/2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub ds: Vec<u32>,
    pub alphas: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub target_slope: f64,
    pub relative_error: f64,
    pub passed: bool,
}

pub fn asymptotic_check(ds: &[u32]) -> Result<AsymptoticReport> {
    if ds.len() < 2 || ds.iter().any(|&d| !(5..=60).contains(&d)) {
        return domain("asymptotic fit needs at least two dimensions in [5, 60]");
    }
    let roots = table1(ds, 1e-14)?;
    let alphas: Vec<f64> = roots.iter().map(|r| (r.q_star + r.d as f64 - 1.0) / 2.0).collect();
    let xs: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
    let ys: Vec<f64> = alphas.iter().zip(&xs).map(|(a, d)| a.ln() - d.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return domain("asymptotic fit needs two distinct dimensions");
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs.iter().zip(&ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    let target = -ASYMPTOTIC_RATE;
    let relative_error = ((slope - target) / target).abs();
    Ok(AsymptoticReport {
        ds: ds.to_vec(),
        alphas,
        slope,
        intercept,
        residuals,
        target_slope: target,
        relative_error,
        passed: relative_error <= 0.15,
    })
}
