//! Integrals ∫_0^∞ f(jj_ν(t)) t^{p-1} dt for f(x) = |x|^s or x^n, split at
//! the zeros of jj_ν, with the remainder past the last zero evaluated from
//! the modulus/phase asymptotics of J_ν.

use std::f64::consts::PI;

use super::gk::adaptive;
use super::QuadratureConfig;
use crate::error::{Error, Result};
use crate::specfun::{
    bessel_modulus_series, bessel_phase, bessel_phase_derivative, gamma, jj, jj_zeros,
    log_gamma, SeriesConfig,
};

const MAX_CUT: f64 = 4000.0;
const MODULUS_TERMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Power {
    Abs(f64),
    Signed(u32),
}

impl Power {
    pub(crate) fn exponent(self) -> f64 {
        match self {
            Power::Abs(s) => s,
            Power::Signed(n) => n as f64,
        }
    }

    fn even_integer(self) -> Option<u32> {
        match self {
            Power::Abs(s) if s == s.round() && (s as i64) % 2 == 0 && s > 0.0 && s < 1e6 => {
                Some(s as u32)
            }
            Power::Signed(n) if n % 2 == 0 => Some(n),
            _ => None,
        }
    }

    fn kinked(self) -> bool {
        matches!(self, Power::Abs(_)) && self.even_integer().is_none()
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Power::Abs(s) => x.abs().powf(s),
            Power::Signed(n) => x.powi(n as i32),
        }
    }

    /// Fourier cosine series of the periodic factor, f(cos θ) = mean + Σ c_j cos(jθ).
    fn fourier(self) -> Result<(f64, Vec<(u64, f64)>)> {
        if let Power::Signed(n) = self {
            if n % 2 == 1 {
                let mut out = Vec::new();
                let mut binom = 1.0;
                let scale = 2f64.powi(1 - n as i32);
                for k in 0..=(n / 2) {
                    if k > 0 {
                        binom *= (n - k + 1) as f64 / k as f64;
                    }
                    out.push(((n - 2 * k) as u64, scale * binom));
                }
                return Ok((0.0, out));
            }
        }
        let s = self.exponent();
        let c0 = (log_gamma(s + 1.0)? - (s - 1.0) * 2f64.ln() - 2.0 * log_gamma(s / 2.0 + 1.0)?).exp();
        let mut out = Vec::new();
        let mut c = c0;
        for m in 0..20_000u64 {
            let mf = m as f64;
            c *= (s / 2.0 - mf) / (s / 2.0 + mf + 1.0);
            if c == 0.0 {
                break;
            }
            out.push((2 * (m + 1), c));
            if c.abs() < 1e-22 * c0 {
                break;
            }
        }
        Ok((0.5 * c0, out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tail {
    pub value: f64,
    pub error: f64,
    /// Rigorous bound on ∫_T^∞ |f(jj)| t^{p-1} from the envelope
    /// |J_ν(t)| ≤ (2/π)^{1/2} (t² - ν₊²)^{-1/4}.
    pub bound: f64,
}

/// Envelope constant: |jj_ν(t)| ≤ C(T) t^{-ν-1/2} for t ≥ T.
pub(crate) fn envelope_constant(nu: f64, cut: f64) -> Result<f64> {
    let nu_plus = if nu >= 0.5 { nu } else { 0.0 };
    if cut <= nu_plus {
        return Err(Error::Domain(format!("envelope needs T > {nu_plus}")));
    }
    let k = 2f64.powf(nu) * gamma(nu + 1.0)?;
    Ok(k * (2.0 / PI).sqrt() * (cut * cut / (cut * cut - nu_plus * nu_plus)).powf(0.25))
}

fn series_power(g: &[f64], alpha: f64) -> Vec<f64> {
    // h = g^alpha with g[0] = 1 (J.C.P. Miller recurrence)
    let n = g.len();
    let mut h = vec![0.0; n];
    h[0] = 1.0;
    for k in 1..n {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += ((alpha + 1.0) * j as f64 - k as f64) * g[j] * h[k - j];
        }
        h[k] = acc / k as f64;
    }
    h
}

struct TailModel {
    nu: f64,
    s: f64,
    p: f64,
    log_k: f64,
    g: Vec<f64>,
}

impl TailModel {
    fn log_amplitude(&self, t: f64) -> f64 {
        let z = 1.0 / (t * t);
        let mut acc = 0.0;
        let mut zk = 1.0;
        for &c in &self.g {
            acc += c * zk;
            zk *= z;
        }
        self.log_k - self.nu * t.ln() + 0.5 * (2.0 / (PI * t)).ln() + 0.5 * acc.ln()
    }

    fn t_of_theta(&self, theta: f64) -> f64 {
        let mut t = theta + (0.5 * self.nu + 0.25) * PI;
        for _ in 0..6 {
            t -= (bessel_phase(self.nu, t) - theta) / bessel_phase_derivative(self.nu, t);
        }
        t
    }

    // integrand density in the phase variable
    fn w_theta(&self, theta: f64) -> f64 {
        let t = self.t_of_theta(theta);
        (self.s * self.log_amplitude(t) + (self.p - 1.0) * t.ln()).exp()
            / bessel_phase_derivative(self.nu, t)
    }
}

fn derivatives(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> [f64; 5] {
    let v: Vec<f64> = (-3..=3).map(|i| f(x + i as f64 * h)).collect();
    let f = |i: i32| v[(i + 3) as usize];
    [
        f(0),
        (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h),
        (-f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) / (12.0 * h * h),
        (f(-3) - 8.0 * f(-2) + 13.0 * f(-1) - 13.0 * f(1) + 8.0 * f(2) - f(3)) / (8.0 * h.powi(3)),
        (-f(-3) + 12.0 * f(-2) - 39.0 * f(-1) + 56.0 * f(0) - 39.0 * f(1) + 12.0 * f(2) - f(3))
            / (6.0 * h.powi(4)),
    ]
}

/// ∫_T^∞ f(jj_ν(t)) t^{p-1} dt for T a zero of J_ν. The mean of the periodic
/// factor is integrated termwise against the modulus expansion; the
/// oscillating remainder is integrated by parts five times in the phase
/// variable.
pub(crate) fn asymptotic_tail(nu: f64, power: Power, p: f64, cut: f64) -> Result<Tail> {
    let s = power.exponent();
    let decay = (nu + 0.5) * s;
    let e = p - 1.0 - decay;
    let log_k = 2f64.ln() * nu + log_gamma(nu + 1.0)?;
    let a = bessel_modulus_series(nu, MODULUS_TERMS);
    let g: Vec<f64> = a.iter().enumerate().map(|(k, c)| c / 4f64.powi(k as i32)).collect();
    let h = series_power(&g, s / 2.0);
    let model = TailModel {
        nu,
        s,
        p,
        log_k,
        g,
    };

    let (mean, harmonics) = power.fourier()?;
    let prefactor = (s * log_k + 0.5 * s * (2.0 / PI).ln()).exp();
    let mut mean_part = 0.0;
    let mut last_mean = 0.0;
    for (j, hj) in h.iter().enumerate() {
        let ex = e + 1.0 - 2.0 * j as f64;
        let term = prefactor * hj * cut.powf(ex) / (-ex);
        mean_part += term;
        last_mean = term;
    }
    mean_part *= mean;
    last_mean *= mean;

    let theta = bessel_phase(nu, cut);
    let kp = ((theta - 0.5 * PI) / PI).round() as i64;
    let mut gk = [0.0f64; 6];
    for &(j, c) in &harmonics {
        let sign = if (j as i64 * kp).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let (cq, sq) = match j % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        let cj = sign * cq;
        let sj = sign * sq;
        let jf = j as f64;
        gk[1] += c * sj / jf;
        gk[2] -= c * cj / (jf * jf);
        gk[3] -= c * sj / jf.powi(3);
        gk[4] += c * cj / jf.powi(4);
        gk[5] += c * sj / jf.powi(5);
    }
    let theta0 = 0.5 * PI + kp as f64 * PI;
    let wf = |th: f64| model.w_theta(th);
    let wd = derivatives(&wf, theta0, 1.0);
    let mut osc = 0.0;
    let mut terms = [0.0f64; 6];
    for k in 1..=5 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms[k] = sign * wd[k - 1] * gk[k];
        osc += terms[k];
    }
    let error = last_mean.abs() + terms[4].abs() + terms[5].abs() + 1e-15 * (mean_part.abs() + osc.abs());

    let c = envelope_constant(nu, cut)?;
    let bound = c.powf(s) * cut.powf(e + 1.0) / (-(e + 1.0));
    Ok(Tail {
        value: mean_part + osc,
        error,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ArchIntegral {
    pub value: f64,
    pub error: f64,
    pub tail: Tail,
    pub cut: f64,
    pub panels: usize,
}

/// ∫_0^∞ f(jj_ν(t)) t^{p-1} dt with f = |·|^s or (·)^n; needs
/// 0 < p < (ν + 1/2) s for absolute convergence.
pub(crate) fn power_integral(
    nu: f64,
    power: Power,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<ArchIntegral> {
    let s = power.exponent();
    if !(p > 0.0) || !(s > 0.0) {
        return Err(Error::Domain(format!("need p > 0 and s > 0, got p = {p}, s = {s}")));
    }
    let decay = (nu + 0.5) * s;
    if !(p < decay) {
        return Err(Error::Divergent(format!(
            "∫ |jj|^s t^(p-1) needs p < {decay}, got p = {p}"
        )));
    }
    cfg.validate()?;
    let scfg = SeriesConfig::default();
    jj(nu, 2.0 * crate::specfun::SERIES_CROSSOVER, &scfg)?;
    let mut cut = cfg.tail_cut;
    loop {
        let r = integrate_to_cut(nu, power, p, cut, cfg, &scfg)?;
        let target = cfg.abs_tol.max(cfg.rel_tol * r.value.abs());
        if r.error <= target {
            return Ok(r);
        }
        if r.tail.error > 0.5 * r.error && 2.0 * cut <= MAX_CUT {
            cut *= 2.0;
            continue;
        }
        return Err(Error::ToleranceNotMet {
            requested: target,
            achieved: r.error,
        });
    }
}

fn integrate_to_cut(
    nu: f64,
    power: Power,
    p: f64,
    min_cut: f64,
    cfg: &QuadratureConfig,
    scfg: &SeriesConfig,
) -> Result<ArchIntegral> {
    let zeros = jj_zeros(nu, min_cut + 2.0 * PI)?;
    let last = zeros
        .iter()
        .position(|&z| z >= min_cut)
        .ok_or_else(|| Error::Domain("no zero beyond the tail cut".into()))?;
    let zeros = &zeros[..=last];
    let cut = zeros[last];
    let f = |t: f64| power.apply(jj(nu, t, scfg).unwrap_or(f64::NAN));
    let kinked = power.kinked();
    let pieces = 2 * zeros.len();
    let abs_tol = cfg.abs_tol / (4.0 * pieces as f64);
    let rel_tol = 0.1 * cfg.rel_tol;
    let max_panels = cfg.max_panels;

    let mut value = 0.0;
    let mut error = 0.0;
    let mut panels = 0;
    let mut add = |v: f64, e: f64, n: usize| {
        value += v;
        error += e;
        panels += n;
    };

    // [0, z1/2]: subtract f(0) = 1 to tame t^{p-1}
    let c = 0.5 * zeros[0];
    let head = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        (f(t) - 1.0) * t.powf(p - 1.0)
    };
    let r = adaptive(&head, 0.0, c, abs_tol, rel_tol, max_panels);
    add(r.value + c.powf(p) / p, r.error, r.panels);
    let r = half_arch(&f, p, c, zeros[0], false, kinked, abs_tol, rel_tol, max_panels);
    add(r.0, r.1, r.2);
    for w in zeros.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = 0.5 * (a + b);
        let r = half_arch(&f, p, a, m, true, kinked, abs_tol, rel_tol, max_panels);
        add(r.0, r.1, r.2);
        let r = half_arch(&f, p, m, b, false, kinked, abs_tol, rel_tol, max_panels);
        add(r.0, r.1, r.2);
    }
    if !value.is_finite() {
        return Err(Error::Domain("integrand evaluation failed".into()));
    }
    let tail = asymptotic_tail(nu, power, p, cut)?;
    Ok(ArchIntegral {
        value: value + tail.value,
        error: error + tail.error,
        tail,
        cut,
        panels,
    })
}

/// Half an arch [a, b] whose zero sits at `a` (zero_left) or at `b`. For
/// kinked integrands the cubic substitution t = zero ± L y³ smooths the
/// |t - zero|^s behaviour.
#[allow(clippy::too_many_arguments)]
fn half_arch<F: Fn(f64) -> f64>(
    f: &F,
    p: f64,
    a: f64,
    b: f64,
    zero_left: bool,
    kinked: bool,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> (f64, f64, usize) {
    if !kinked {
        let g = |t: f64| f(t) * t.powf(p - 1.0);
        let r = adaptive(&g, a, b, abs_tol, rel_tol, max_panels);
        return (r.value, r.error, r.panels);
    }
    let len = b - a;
    let g = |y: f64| {
        let y2 = y * y;
        let t = if zero_left { a + len * y2 * y } else { b - len * y2 * y };
        f(t) * t.powf(p - 1.0) * 3.0 * len * y2
    };
    let r = adaptive(&g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
    (r.value, r.error, r.panels)
}
