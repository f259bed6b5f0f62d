//! Gauss hypergeometric function 2F1(a, b; c; t) on 0 <= t <= 1.

use super::{digamma, gamma, rgamma, SeriesConfig};
use crate::error::{domain, Error, Result};

fn nonpositive_integer(x: f64) -> Option<usize> {
    if x <= 0.0 && x == x.round() {
        Some((-x) as usize)
    } else {
        None
    }
}

/// Direct series. Stops once the next term bounds the geometric remainder
/// below `rel_tol` of the partial sum.
fn series(a: f64, b: f64, c: f64, t: f64, cfg: &SeriesConfig, max_terms: usize) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..max_terms {
        let kf = k as f64;
        let next = term * (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * t;
        if next == 0.0 {
            return Ok(sum);
        }
        let ratio = (next / term).abs();
        sum += next;
        term = next;
        if ratio < 1.0 {
            let remainder = term.abs() * ratio / (1.0 - ratio);
            if remainder <= cfg.rel_tol * sum.abs() && term.abs() <= cfg.rel_tol * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence {
        what: "2F1 series",
        terms: max_terms,
    })
}

fn polynomial(a: f64, b: f64, c: f64, t: f64, degree: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..degree {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * t;
        sum += term;
    }
    sum
}

fn gauss_sum(a: f64, b: f64, c: f64) -> Result<f64> {
    Ok(gamma(c)? * gamma(c - a - b)? * rgamma(c - a) * rgamma(c - b))
}

// Connection to argument 1 - t when c - a - b is not an integer.
fn connect_generic(a: f64, b: f64, c: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let w = 1.0 - t;
    let s = c - a - b;
    let f1 = series(a, b, 1.0 - s, w, cfg, cfg.max_terms)?;
    let f2 = series(c - a, c - b, 1.0 + s, w, cfg, cfg.max_terms)?;
    let g = gamma(c)?;
    let t1 = g * gamma(s)? * rgamma(c - a) * rgamma(c - b) * f1;
    let t2 = g * gamma(-s)? * rgamma(a) * rgamma(b) * w.powf(s) * f2;
    Ok(t1 + t2)
}

// Connection when c = a + b + m with m a non-negative integer.
fn connect_integer(a: f64, b: f64, m: usize, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let w = 1.0 - t;
    let c = a + b + m as f64;
    let mf = m as f64;
    let mut finite = 0.0;
    if m > 0 {
        let mut term = 1.0;
        for n in 0..m {
            if n > 0 {
                let nf = (n - 1) as f64;
                term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
            }
            finite += term;
        }
        finite *= gamma(mf)? * gamma(c)? * rgamma(a + mf) * rgamma(b + mf);
    }
    let lw = w.ln();
    let mut coef = 1.0;
    for j in 1..=m {
        coef /= j as f64;
    }
    let mut sum = 0.0;
    let mut converged = false;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        if n > 0 {
            let k = nf - 1.0;
            coef *= (a + mf + k) * (b + mf + k) / ((k + 1.0) * (k + 1.0 + mf)) * w;
        }
        let bracket = lw - digamma(nf + 1.0)? - digamma(nf + mf + 1.0)?
            + digamma(a + nf + mf)?
            + digamma(b + nf + mf)?;
        let term = coef * bracket;
        sum += term;
        if n > 2 && term.abs() <= cfg.rel_tol * sum.abs().max(1e-300) && coef.abs() < 1.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "2F1 logarithmic connection series",
            terms: cfg.max_terms,
        });
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let log_part = sign * w.powi(m as i32) * gamma(c)? * rgamma(a) * rgamma(b) * sum;
    Ok(finite - log_part)
}

/// 2F1(a, b; c; t) for 0 <= t <= 1. At t = 1 the Gauss sum is used and
/// requires c - a - b > 0. Near t = 1 the connection formulas to 1 - t keep
/// the series short.
pub fn hyp2f1(a: f64, b: f64, c: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("hyp2f1 requires 0 <= t <= 1, got {t}"));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Pole(c));
    }
    let degree = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };
    if let Some(n) = degree {
        return Ok(polynomial(a, b, c, t, n));
    }
    let s = c - a - b;
    if t == 1.0 {
        if s <= 0.0 {
            return Err(Error::Divergent(format!(
                "2F1 at t = 1 needs c - a - b > 0, got {s}"
            )));
        }
        return gauss_sum(a, b, c);
    }
    if t <= 0.75 {
        return series(a, b, c, t, cfg, cfg.max_terms);
    }
    let r = s.round();
    if s == r {
        if s >= 0.0 {
            return connect_integer(a, b, r as usize, t, cfg);
        }
        // Euler transformation moves the integer to the non-negative side.
        let m = (-r) as usize;
        let inner = connect_integer(c - a, c - b, m, t, cfg)?;
        return Ok((1.0 - t).powf(s) * inner);
    }
    if (s - r).abs() < 1e-6 {
        // close to the logarithmic case: the connection formula cancels badly
        return series(a, b, c, t, cfg, cfg.max_terms.max(2_000_000));
    }
    connect_generic(a, b, c, t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn elementary_cases() {
        // 2F1(1,1;2;t) = -ln(1-t)/t
        for &t in &[0.1, 0.5, 0.8, 0.95, 0.999] {
            let v = hyp2f1(1.0, 1.0, 2.0, t, &cfg()).unwrap();
            let r = -(1.0 - t).ln() / t;
            assert!((v - r).abs() < 1e-13 * r, "t = {t}: {v} vs {r}");
        }
        // 2F1(a,b;b;t) = (1-t)^{-a}
        let v = hyp2f1(0.3, 1.7, 1.7, 0.9, &cfg()).unwrap();
        assert!((v - 0.1f64.powf(-0.3)).abs() < 1e-12);
    }

    #[test]
    fn polynomial_case() {
        assert_eq!(hyp2f1(0.5, 0.0, 2.0, 0.7, &cfg()).unwrap(), 1.0);
        // 2F1(-1, b; c; t) = 1 - b t / c
        let v = hyp2f1(-1.0, 0.4, 2.0, 1.0, &cfg()).unwrap();
        assert!((v - 0.8).abs() < 1e-15);
    }

    #[test]
    fn gauss_sum_at_one() {
        let v = hyp2f1(0.25, -0.75, 2.0, 1.0, &cfg()).unwrap();
        let r = gamma(2.0).unwrap() * gamma(2.5).unwrap()
            / (gamma(1.75).unwrap() * gamma(2.75).unwrap());
        assert!((v - r).abs() < 1e-14);
        assert!(matches!(hyp2f1(1.0, 2.0, 2.5, 1.0, &cfg()), Err(Error::Divergent(_))));
    }

    #[test]
    fn connection_agrees_with_series() {
        let params = [
            (0.25, -0.75, 2.0),
            (0.5, -0.5, 2.0),
            (1.2, -0.4, 2.0),
            (0.7, 0.2, 2.5),
            (1.0, 0.0001, 2.0),
            (0.3, 0.9, 1.2),
        ];
        for &(a, b, c) in &params {
            for &t in &[0.76, 0.85, 0.95] {
                let v = hyp2f1(a, b, c, t, &cfg()).unwrap();
                let r = series(a, b, c, t, &cfg(), 1_000_000).unwrap();
                assert!((v - r).abs() < 1e-12 * r.abs().max(1.0), "{a} {b} {c} {t}: {v} vs {r}");
            }
        }
    }

    #[test]
    fn approaches_gauss_sum() {
        let (a, b, c) = (0.9995, -0.0005, 2.0);
        let near = hyp2f1(a, b, c, 1.0 - 1e-9, &cfg()).unwrap();
        let at = hyp2f1(a, b, c, 1.0, &cfg()).unwrap();
        assert!((near - at).abs() < 1e-7);
    }
}
