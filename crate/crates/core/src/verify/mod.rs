//! Grid and tangent-line checks of the analytic inequalities behind the
//! sharp constants. Every verifier returns a [`VerificationReport`] whose
//! margins are computed in floating point: this is evidence, not proof.

mod base;
mod integral;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quad::QuadratureConfig;

pub use base::{
    verify_bisubharmonic, verify_ind_base, verify_small_lemmas, verify_two_coeff_bounds,
    PhiFunction,
};
pub use integral::{
    h_sign_chart, table2, table3, verify_h_regions, verify_h_tilde_region,
    verify_interpolation_tilde, verify_u_less_g, ChartPoint, TangentTable, UCase,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub margin: f64,
}

/// A scalar sub-certificate: `value` compared against a published or
/// derived `bound`. `margin > 0` exactly when the check passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub passed: bool,
}

/// Inequality margins enter `min_margin`; identity checks (a computed value
/// against a known one, `bound` holding the tolerance) enter it only when
/// they fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Inequality,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub region: String,
    pub grid: Vec<usize>,
    pub passed: bool,
    pub min_margin: f64,
    /// The inequality holds with equality by construction (boundary case);
    /// such a report passes with zero margins excluded from the minimum.
    pub degenerate: bool,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<Check>,
}

/// Grid resolutions. `per_axis` drives quadrature-backed verifiers,
/// `fine_per_axis` the ones built from closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub per_axis: usize,
    pub fine_per_axis: usize,
    pub quad: QuadratureConfig,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            per_axis: 60,
            fine_per_axis: 200,
            quad: QuadratureConfig::default(),
        }
    }
}

impl GridConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.per_axis < 2 || self.fine_per_axis < 2 {
            return domain("grids need at least 2 points per axis");
        }
        self.quad.validate()
    }
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub(crate) fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect();
    // pin the endpoints exactly
    v[0] = a;
    if n > 1 {
        v[n - 1] = b;
    }
    v
}

/// Evaluates `f` at every point in parallel, keeping the input order.
pub(crate) fn eval_grid<F>(points: &[Vec<f64>], f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    points.par_iter().map(|x| f(x)).collect()
}

pub(crate) fn product(a: &[f64], b: &[f64]) -> Vec<Vec<f64>> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect()
}

pub(crate) struct ReportBuilder {
    lemma_id: String,
    region: String,
    grid: Vec<usize>,
    points: Vec<Witness>,
    checks: Vec<Check>,
    degenerate: bool,
}

impl ReportBuilder {
    pub(crate) fn new(lemma_id: &str, region: impl Into<String>) -> Self {
        Self {
            lemma_id: lemma_id.to_string(),
            region: region.into(),
            grid: Vec::new(),
            points: Vec::new(),
            checks: Vec::new(),
            degenerate: false,
        }
    }

    pub(crate) fn grid(&mut self, dims: &[usize]) -> &mut Self {
        self.grid.extend_from_slice(dims);
        self
    }

    pub(crate) fn points(&mut self, points: Vec<Vec<f64>>, margins: Vec<f64>) -> &mut Self {
        for (point, margin) in points.into_iter().zip(margins) {
            self.points.push(Witness { point, margin });
        }
        self
    }

    pub(crate) fn point(&mut self, point: Vec<f64>, margin: f64) -> &mut Self {
        self.points.push(Witness { point, margin });
        self
    }

    /// Passes when `value > bound`.
    pub(crate) fn at_least(&mut self, name: &str, value: f64, bound: f64) -> &mut Self {
        self.push_check(name, value, bound, value - bound)
    }

    /// Passes when `value < bound`.
    pub(crate) fn at_most(&mut self, name: &str, value: f64, bound: f64) -> &mut Self {
        self.push_check(name, value, bound, bound - value)
    }

    /// Passes when `|value - expected| < tol`.
    pub(crate) fn within(&mut self, name: &str, value: f64, expected: f64, tol: f64) -> &mut Self {
        self.push_check(name, value, tol, tol - (value - expected).abs());
        self.checks.last_mut().unwrap().kind = CheckKind::Identity;
        self
    }

    fn push_check(&mut self, name: &str, value: f64, bound: f64, margin: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            kind: CheckKind::Inequality,
            value,
            bound,
            margin,
            passed: margin > 0.0,
        });
        self
    }

    pub(crate) fn degenerate(&mut self) -> &mut Self {
        self.degenerate = true;
        self
    }

    pub(crate) fn finish(&mut self) -> VerificationReport {
        let margins = self
            .points
            .iter()
            .map(|w| w.margin)
            .chain(
                self.checks
                    .iter()
                    .filter(|c| c.kind == CheckKind::Inequality || !c.passed)
                    .map(|c| c.margin),
            );
        let mut min_margin = f64::INFINITY;
        for m in margins {
            if m.is_nan() {
                min_margin = f64::NAN;
                break;
            }
            min_margin = min_margin.min(m);
        }
        let mut witnesses = Vec::new();
        if !self.points.is_empty() {
            let cmp = |a: &&Witness, b: &&Witness| a.margin.total_cmp(&b.margin);
            let lo = self.points.iter().min_by(cmp).unwrap().clone();
            let hi = self.points.iter().max_by(cmp).unwrap().clone();
            witnesses.push(lo);
            if self.points.len() > 1 {
                witnesses.push(hi);
            }
        }
        VerificationReport {
            lemma_id: self.lemma_id.clone(),
            region: self.region.clone(),
            grid: self.grid.clone(),
            passed: min_margin > 0.0,
            min_margin,
            degenerate: self.degenerate,
            witnesses,
            checks: std::mem::take(&mut self.checks),
        }
    }
}

pub type ScalarFn<'a> = Box<dyn Fn(f64) -> Result<f64> + Sync + 'a>;

/// Convex `lower` to be dominated by tangents of convex `upper` on each
/// subinterval of `breakpoints`.
pub struct ConvexPair<'a> {
    pub lower: ScalarFn<'a>,
    pub upper: ScalarFn<'a>,
    /// Derivative of `upper`; central differences are used when absent.
    pub upper_derivative: Option<ScalarFn<'a>>,
    pub breakpoints: Vec<f64>,
    /// Tangent points, one per subinterval; midpoints when absent.
    pub anchors: Option<Vec<f64>>,
}

/// Differences tangent − lower at the two ends of every subinterval.
pub fn tangent_margins(pair: &ConvexPair) -> Result<Vec<(f64, f64)>> {
    let b = &pair.breakpoints;
    if b.len() < 2 || b.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("breakpoints must be strictly increasing with at least two entries");
    }
    let span = b[b.len() - 1] - b[0];
    let anchors: Vec<f64> = match &pair.anchors {
        Some(a) if a.len() == b.len() - 1 => a.clone(),
        Some(_) => return domain("need one anchor per subinterval"),
        None => b.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
    };
    let mut out = Vec::with_capacity(anchors.len());
    for (w, &v) in b.windows(2).zip(&anchors) {
        let rv = (pair.upper)(v)?;
        let slope = match &pair.upper_derivative {
            Some(d) => d(v)?,
            None => {
                let h = 1e-6 * span;
                ((pair.upper)(v + h)? - (pair.upper)(v - h)?) / (2.0 * h)
            }
        };
        let mut ends = [0.0; 2];
        for (k, &x) in w.iter().enumerate() {
            let l = (pair.lower)(x)?;
            let m = rv + slope * (x - v) - l;
            if !m.is_finite() {
                return Err(Error::Domain(format!("non-finite tangent margin at {x}")));
            }
            ends[k] = m;
        }
        out.push((ends[0], ends[1]));
    }
    Ok(out)
}

/// Tangent-chord domination: passes iff every tangent of `upper` exceeds
/// `lower` at both ends of its subinterval, which by convexity of `lower`
/// gives `upper > lower` on the whole interval.
pub fn tangent_chord_dominates(lemma_id: &str, pair: &ConvexPair) -> Result<VerificationReport> {
    let margins = tangent_margins(pair)?;
    let b = &pair.breakpoints;
    let mut rb = ReportBuilder::new(
        lemma_id,
        format!("[{}, {}] in {} pieces", b[0], b[b.len() - 1], b.len() - 1),
    );
    rb.grid(&[margins.len()]);
    for (i, &(l, r)) in margins.iter().enumerate() {
        rb.point(vec![i as f64, b[i]], l);
        rb.point(vec![i as f64, b[i + 1]], r);
    }
    Ok(rb.finish())
}
