//! Verifiers built from closed forms: the two-point inequality of the
//! inductive base, the two-coefficient bounds, bisubharmonicity of the
//! regularized kernel and the small auxiliary inequalities.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use super::{eval_grid, linspace, product, GridConfig, ReportBuilder, VerificationReport};
use crate::constants::gaussian_neg_moment;
use crate::error::{domain, Result};
use crate::specfun::{gamma, hyp2f1, log_gamma, trigamma, SeriesConfig, EULER_GAMMA};

const CLIP: f64 = 1e-3;

fn grid_min(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// h_q(t) = Γ(2−q)(2 − ((3−t)/2)^{−q}) − (1 − q(1−q)t/2 − q²(1−q²)t²/12).
pub fn ind_base_gap(q: f64, t: f64) -> Result<f64> {
    let r = gamma(2.0 - q)? * (2.0 - ((3.0 - t) / 2.0).powf(-q));
    let quad = 1.0 - q * (1.0 - q) / 2.0 * t - q * q * (1.0 - q * q) / 12.0 * t * t;
    Ok(r - quad)
}

/// h_q(t) >= 0 on [1/8, 1) x [0, 1] together with the concavity floor,
/// the endpoint tangent checks at t = 0 and the chord checks at t = 1.
/// At q = 1 the gap vanishes at t = 1, so the grid stops at q = 0.999.
pub fn verify_ind_base(cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let n = cfg.fine_per_axis;
    let qs = linspace(0.125, 1.0 - CLIP, n);
    let ts = linspace(0.0, 1.0, n);
    let points = product(&qs, &ts);
    let margins = eval_grid(&points, |x| ind_base_gap(x[0], x[1]))?;

    let mut boundary = f64::INFINITY;
    let mut interior = f64::INFINITY;
    for (x, m) in points.iter().zip(&margins) {
        if x[1] == 0.0 || x[1] == 1.0 {
            boundary = boundary.min(*m);
        } else {
            interior = interior.min(*m);
        }
    }

    let floor_q = linspace(CLIP, 1.0 - CLIP, n);
    let floor = eval_grid(
        &floor_q.iter().map(|&q| vec![q]).collect::<Vec<_>>(),
        |x| Ok(gamma(2.0 - x[0])? - 1.5f64.powf(x[0] + 1.0) * x[0] * (1.0 - x[0])),
    )?;
    let q = 0.25;
    let h2 = -(2f64.powf(q)) * gamma(2.0 - q)? * q * (q + 1.0) * 3f64.powf(-q - 2.0)
        + q * q * (1.0 - q * q) / 6.0;
    let scaled = -(3f64.powf(q + 2.0)) / (2f64.powf(q) * q * (1.0 + q)) * h2;

    // part (A): t = 0
    let g = |q: f64| log_gamma(2.0 - q);
    let f = |q: f64| -std::f64::consts::LN_2 - (1.0 - 0.5 * (2f64 / 3.0).powf(q)).ln();
    let q0 = 0.125;
    let g1 = -crate::specfun::digamma(2.0 - q0)?;
    let tangent = |q: f64| -> Result<f64> { Ok(g(q0)? + g1 * (q - q0)) };

    // part (B): t = 1, on the whole of [0, 1]
    let fb = |q: f64| -> Result<f64> {
        Ok(log_gamma(2.0 - q)? + q * (1.0 - q) / 2.0 + q * q * (1.0 - q * q) / 12.0)
    };
    let fb_min = grid_min(&eval_grid(
        &linspace(CLIP, 1.0 - CLIP, n).into_iter().map(|q| vec![q]).collect::<Vec<_>>(),
        |x| fb(x[0]),
    )?);
    let h = |q: f64| trigamma(2.0 - q);
    let (h0, hh, h1) = (h(0.0)?, h(0.5)?, h(1.0)?);
    let chord1 = |q: f64| 2.0 / 3.0 * (PI * PI - 9.0) * q + PI * PI / 6.0 - 1.0 - q * q - 5.0 / 6.0;
    let chord2 =
        |q: f64| 2.0 * (12.0 - PI * PI) / 3.0 * q + 5.0 * PI * PI / 6.0 - 8.0 - q * q - 5.0 / 6.0;

    Ok(ReportBuilder::new("ind_base", "q in [1/8, 0.999], t in [0, 1]")
        .grid(&[n, n])
        .points(points, margins)
        .at_least("concavity floor, min over q", grid_min(&floor), 0.3175)
        .at_least("scaled -h''(0) at q = 1/4", scaled, 0.3175)
        .at_least("interior minimum over boundary minimum", interior, boundary)
        .at_least("l(1/8) - f(1/8)", tangent(0.125)? - f(0.125), 0.0005)
        .at_least("l(0.35) - f(0.35)", tangent(0.35)? - f(0.35), 0.0003)
        .at_most("f(0.35)", f(0.35), -0.124)
        .at_least("ln 0.885", 0.885f64.ln(), -0.124)
        .at_least("t = 1 log gap on [0.001, 0.999]", fb_min, 0.0)
        .at_most("chord on [0, 1/2] at its maximum", chord1((PI * PI - 9.0) / 3.0), -0.1)
        .at_most("chord on [1/2, 1] at its maximum", chord2((12.0 - PI * PI) / 3.0), -0.1)
        .within("psi'(2) = pi^2/6 - 1", h0, PI * PI / 6.0 - 1.0, 1e-12)
        .within("psi'(3/2) = pi^2/2 - 4", hh, PI * PI / 2.0 - 4.0, 1e-12)
        .within("psi'(1) = pi^2/6", h1, PI * PI / 6.0, 1e-12)
        .finish())
}

/// E|e₁ + aξ|^{-p} for ξ uniform on S^{d-1} and 0 <= a < 1.
pub fn two_coeff_moment(d: u32, p: f64, a: f64) -> Result<f64> {
    let df = d as f64;
    hyp2f1(p / 2.0, (p - df + 2.0) / 2.0, df / 2.0, a * a, &SeriesConfig::default())
}

/// The quadratic upper bound on E|e₁ + √t ξ|^{-p} in d = 4 (for p <= 2), and
/// the bound by 1 together with monotonicity in a (for p <= d − 2). At
/// p = 2 or p = d − 2 the bounds hold with equality and the report is
/// marked degenerate.
pub fn verify_two_coeff_bounds(d: u32, p: f64, cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let df = d as f64;
    let quad_applies = d == 4 && p > 0.0 && p <= 2.0;
    let min_applies = d >= 3 && p > 0.0 && p <= df - 2.0;
    if !quad_applies && !min_applies {
        return domain(format!("no two-coefficient bound applies to d = {d}, p = {p}"));
    }
    let n = cfg.fine_per_axis;
    let mut rb = ReportBuilder::new(
        "two_coeff_bounds",
        format!("d = {d}, p = {p}, t and a in (0, 1)"),
    );
    let degenerate = (quad_applies && p == 2.0) || (min_applies && p == df - 2.0);
    if degenerate {
        rb.degenerate();
    }
    if quad_applies && !degenerate {
        let ts = linspace(0.01, 0.999, n);
        let pts: Vec<Vec<f64>> = ts.iter().map(|&t| vec![0.0, t]).collect();
        let m = eval_grid(&pts, |x| {
            let t = x[1];
            let bound = 1.0 - p * (2.0 - p) / 8.0 * t - p * p * (4.0 - p * p) / 192.0 * t * t;
            Ok(bound - two_coeff_moment(4, p, t.sqrt())?)
        })?;
        rb.points(pts, m);
    }
    if min_applies && !degenerate {
        let a = linspace(0.01, 0.99, n);
        let e = eval_grid(
            &a.iter().map(|&a| vec![a]).collect::<Vec<_>>(),
            |x| two_coeff_moment(d, p, x[0]),
        )?;
        rb.at_least("1 - E at the smallest a", 1.0 - e[0], 0.0);
        for (i, w) in e.windows(2).enumerate() {
            rb.point(vec![1.0, a[i + 1]], w[0] - w[1]);
        }
    }
    rb.grid(&[n]);
    let mut report = rb.finish();
    if degenerate {
        report.passed = true;
    }
    Ok(report)
}

/// Coefficients of ΔΔ(r² + δ)^{-p/2} = p(p+2)(r²+δ)^{-p/2-4}(A r⁴ + B r² + C).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiharmonicQuartic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BiharmonicQuartic {
    pub fn new(d: u32, p: f64, delta: f64) -> Self {
        let d = d as f64;
        Self {
            a: (p - d + 2.0) * (p - d + 4.0),
            b: 2.0 * delta * (d + 2.0) * (d - 4.0 - p),
            c: delta * delta * d * (d + 2.0),
        }
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        (self.a * r2 + self.b) * r2 + self.c
    }
}

// Σ c_β u^β with u = r² + δ, keyed by β·2 (exponents are half-integers
// shifted by -p/2, tracked as integer offsets from the base exponent).
fn radial_laplacian(terms: &BTreeMap<i64, f64>, base: f64, d: f64, delta: f64) -> BTreeMap<i64, f64> {
    let mut out = BTreeMap::new();
    for (&k, &c) in terms {
        let beta = base - k as f64;
        *out.entry(k + 1).or_insert(0.0) += c * (2.0 * beta * d + 4.0 * beta * (beta - 1.0));
        *out.entry(k + 2).or_insert(0.0) -= c * 4.0 * beta * (beta - 1.0) * delta;
    }
    out
}

fn bilaplacian_direct(d: u32, p: f64, delta: f64, r: f64) -> f64 {
    let base = -p / 2.0;
    let mut terms = BTreeMap::new();
    terms.insert(0i64, 1.0);
    let once = radial_laplacian(&terms, base, d as f64, delta);
    let twice = radial_laplacian(&once, base, d as f64, delta);
    let u = r * r + delta;
    twice.iter().map(|(&k, &c)| c * u.powf(base - k as f64)).sum()
}

/// ΔΔ(|x|² + δ)^{-p/2} >= 0 on R^d for 0 < p <= d − 4: the quartic has
/// A > 0 and negative discriminant, checked by formula, by evaluation on
/// r in [0, 10], and against a direct twofold radial Laplacian.
pub fn verify_bisubharmonic(
    d: u32,
    p: f64,
    deltas: &[f64],
    cfg: &GridConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let df = d as f64;
    if d < 5 {
        return domain(format!("bisubharmonicity needs d >= 5, got {d}"));
    }
    if !(p > 0.0 && p <= df - 4.0) {
        return domain(format!("bisubharmonicity needs 0 < p <= d - 4, got p = {p}, d = {d}"));
    }
    if deltas.is_empty() || deltas.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return domain("deltas must be a non-empty list of positive numbers");
    }
    let degenerate = p == df - 4.0;
    let n = cfg.fine_per_axis;
    let rs = linspace(0.0, 10.0, n);
    let mut rb = ReportBuilder::new(
        "bisubharmonic",
        format!("d = {d}, p = {p}, |x| in [0, 10], {} values of delta", deltas.len()),
    );
    rb.grid(&[deltas.len(), n]);
    if degenerate {
        rb.degenerate();
    }
    for &delta in deltas {
        let q = BiharmonicQuartic::new(d, p, delta);
        let closed = 8.0 * delta * delta * (df + 2.0) * (p + 4.0) * (p - df + 4.0);
        let scale = q.b * q.b + (4.0 * q.a * q.c).abs();
        rb.within(
            &format!("delta = {delta}: discriminant identity, relative"),
            q.discriminant() / scale.max(f64::MIN_POSITIVE),
            closed / scale.max(f64::MIN_POSITIVE),
            1e-12,
        );
        let mut worst = 0.0f64;
        for &r in &rs {
            let u = r * r + delta;
            let claimed = p * (p + 2.0) * u.powf(-p / 2.0 - 4.0) * q.eval(r);
            let direct = bilaplacian_direct(d, p, delta, r);
            worst = worst.max((claimed - direct).abs() / claimed.abs().max(direct.abs()));
            let norm = q.c + q.a * r.powi(4) + q.b.abs() * r * r;
            rb.point(vec![delta, r], q.eval(r) / norm);
        }
        rb.within(&format!("delta = {delta}: direct bilaplacian, relative"), worst, 0.0, 1e-10);
        if !degenerate {
            rb.at_least(&format!("delta = {delta}: A"), q.a, 0.0);
            rb.at_most(&format!("delta = {delta}: discriminant"), q.discriminant(), 0.0);
        }
    }
    Ok(rb.finish())
}

/// φ_p(x) = (1+x)^{-p/2} and its reflection Φ_p about (1, φ_p(1)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiFunction {
    pub p: f64,
}

impl PhiFunction {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return domain(format!("PhiFunction needs p > 0, got {p}"));
        }
        Ok(Self { p })
    }

    pub fn phi(&self, x: f64) -> f64 {
        (1.0 + x).powf(-self.p / 2.0)
    }

    /// Φ_p(x) for x >= 0.
    pub fn reflected(&self, x: f64) -> f64 {
        if x >= 1.0 {
            self.phi(x)
        } else {
            2.0 * self.phi(1.0) - self.phi(2.0 - x)
        }
    }

    /// Φ((a+b)/2) − (Φ(a) + Φ(b))/2.
    pub fn midpoint_gap(&self, a: f64, b: f64) -> f64 {
        self.reflected(0.5 * (a + b)) - 0.5 * (self.reflected(a) + self.reflected(b))
    }
}

/// (13/20)^q < Γ(2−q) on (0, 2), midpoint concavity of Φ_p for pairs with
/// mean below 1, and the projection chain (13/10)^{p/2} < 2^{p/2}Γ(2−p/2)
/// on (0, 1/4].
pub fn verify_small_lemmas(cfg: &GridConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let n = cfg.fine_per_axis;
    let ln_ratio = (13f64 / 20.0).ln();
    let qs: Vec<Vec<f64>> = linspace(CLIP, 2.0 - CLIP, n).into_iter().map(|q| vec![q]).collect();
    let margins = eval_grid(&qs, |x| Ok(log_gamma(2.0 - x[0])? - x[0] * ln_ratio))?;

    // pairs symmetric about 1 give equality, so mean 1 is excluded
    let mut concavity = f64::INFINITY;
    for &p in &[0.3, 1.0, 2.5] {
        let phi = PhiFunction::new(p)?;
        for m in linspace(0.02, 0.99, n) {
            for h in linspace(0.01, m, n) {
                concavity = concavity.min(phi.midpoint_gap(m - h, m + h));
            }
        }
    }
    let example = PhiFunction::new(1.0)?.midpoint_gap(0.2, 1.4);

    let ps: Vec<Vec<f64>> = linspace(CLIP, 0.25, n).into_iter().map(|p| vec![p]).collect();
    let chain = grid_min(&eval_grid(&ps, |x| {
        Ok(gaussian_neg_moment(x[0])? - 1.3f64.powf(x[0] / 2.0))
    })?);

    Ok(ReportBuilder::new("small_lemmas", "q in [0.001, 1.999]; Phi_p pairs; p in [0.001, 0.25]")
        .grid(&[n])
        .points(qs, margins)
        .at_least("f'(0) = gamma - 1 - ln(13/20)", EULER_GAMMA - 1.0 - ln_ratio, 0.007)
        .at_least("Gamma(1)", gamma(1.0)?, 0.65)
        .at_least("Phi_p midpoint gap, min over p in {0.3, 1, 2.5}", concavity, 0.0)
        .at_least("Phi_1 midpoint gap at (0.2, 1.4)", example, 0.0)
        .at_least("projection chain gap", chain, 0.0)
        .finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridConfig {
        GridConfig {
            per_axis: 8,
            fine_per_axis: 40,
            ..GridConfig::default()
        }
    }

    #[test]
    fn ind_base_passes() {
        let r = verify_ind_base(&small()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
    }

    #[test]
    fn ind_base_vanishes_at_q_one_t_one() {
        assert!(ind_base_gap(1.0, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn corollary_example_values() {
        let f = two_coeff_moment(4, 1.0, 0.5f64.sqrt()).unwrap();
        assert!(f <= 1.0 - 1.0 / 16.0 - 3.0 * 0.25 / 192.0);
        assert!((two_coeff_moment(4, 1e-9, 0.5).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_coeff_bounds() {
        for &(d, p) in &[(4, 0.5), (4, 1.0), (4, 1.999), (6, 3.0), (7, 5.0)] {
            let r = verify_two_coeff_bounds(d, p, &small()).unwrap();
            assert!(r.passed, "d={d} p={p}: {}", r.min_margin);
        }
        let r = verify_two_coeff_bounds(4, 2.0, &small()).unwrap();
        assert!(r.passed && r.degenerate);
        assert!(verify_two_coeff_bounds(3, 1.5, &small()).is_err());
    }

    #[test]
    fn bisubharmonic_cases() {
        let r = verify_bisubharmonic(5, 0.5, &[1.0], &small()).unwrap();
        assert!(r.passed && !r.degenerate);
        let r = verify_bisubharmonic(10, 5.9, &[0.1], &small()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
        let r = verify_bisubharmonic(5, 1.0, &[0.5, 2.0], &small()).unwrap();
        assert!(r.passed && r.degenerate);
        assert!(verify_bisubharmonic(5, 1.5, &[1.0], &small()).is_err());
        assert!(verify_bisubharmonic(4, 0.0, &[1.0], &small()).is_err());
    }

    #[test]
    fn phi_reflection() {
        let f = PhiFunction::new(1.0).unwrap();
        assert_eq!(f.reflected(1.0), f.phi(1.0));
        for k in 0..=20 {
            let x = k as f64 * 0.1;
            assert!(f.reflected(x) <= f.phi(x) + 1e-15);
        }
        assert!(PhiFunction::new(0.0).is_err());
    }

    #[test]
    fn small_lemmas_pass() {
        let r = verify_small_lemmas(&small()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
    }
}
