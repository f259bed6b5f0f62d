//! Grid and oracle checks shared by the property tests and the acceptance
//! binary. Each returns Err with a description of the first violation.
#![allow(dead_code)]

use std::f64::consts::PI;

use khinchin::constants::*;
use khinchin::phase::{h, h_tilde, q_star};
use khinchin::quad::*;
use khinchin::sample::{estimate_moment, random_unit_vectors};
use khinchin::specfun::*;
use khinchin::verify::{self, GridConfig, UCase};

pub type Check = Result<(), String>;

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

pub fn jj1(t: f64) -> f64 {
    jj(1.0, t, &SeriesConfig::default()).unwrap()
}

pub fn digamma_recurrence() -> Check {
    for x in logspace(0.1, 100.0, 400) {
        let r = digamma(x + 1.0).map_err(e)? - digamma(x).map_err(e)? - 1.0 / x;
        ensure(r.abs() <= 1e-10, || format!("psi recurrence at {x}: {r:e}"))?;
    }
    Ok(())
}

pub fn gamma_recurrence() -> Check {
    for x in linspace(0.1, 30.0, 600) {
        let a = gamma(x + 1.0).map_err(e)?;
        let b = x * gamma(x).map_err(e)?;
        ensure(((a - b) / a).abs() <= 1e-12, || format!("gamma recurrence at {x}"))?;
    }
    Ok(())
}

pub fn jj_bounded() -> Check {
    for t in linspace(0.0, 100.0, 10_001) {
        ensure(jj1(t).abs() <= 1.0, || format!("|jj1({t})| > 1"))?;
    }
    Ok(())
}

/// |jj₁(t)| <= exp(−t²/8 − t⁴/384) on [0, 4]; the two sides agree through
/// t⁴, so a rounding-level slack is allowed.
pub fn quartic_envelope() -> Check {
    for t in linspace(0.0, 4.0, 10_000) {
        let env = (-t * t / 8.0 - t.powi(4) / 384.0).exp();
        ensure(jj1(t).abs() <= env + 4.0 * f64::EPSILON, || format!("quartic envelope at {t}"))?;
    }
    Ok(())
}

pub fn power_envelope() -> Check {
    let c = (8.0 / PI).sqrt();
    for t in linspace(1.01, 100.0, 10_000) {
        let env = c / (t * (t * t - 1.0).powf(0.25));
        ensure(jj1(t).abs() <= env, || format!("power envelope at {t}"))?;
    }
    Ok(())
}

/// The t^{-3/2} envelope with constant valid beyond t₀.
pub fn tail_envelope() -> Check {
    let c = (8.0 / PI).sqrt();
    for t0 in [1.5f64, 10.0, 50.0] {
        let k = c * (t0 * t0 / (t0 * t0 - 1.0)).powf(0.25);
        for t in linspace(t0, 4.0 * t0, 2_000) {
            ensure(jj1(t).abs() <= k * t.powf(-1.5), || format!("tail envelope at t0 = {t0}, t = {t}"))?;
        }
    }
    Ok(())
}

pub fn pochhammer_duplication() -> Check {
    for p in [0.3, 1.0, 2.7] {
        for k in 0..=20usize {
            let a = pochhammer(p / 2.0, 2 * k) * 4f64.powi(-(k as i32));
            let b = pochhammer(p / 4.0, k) * pochhammer((p + 2.0) / 4.0, k);
            ensure(((a - b) / b).abs() <= 1e-12, || format!("duplication p = {p}, k = {k}"))?;
        }
    }
    Ok(())
}

/// t -> 2F1(p/2, p/2 − 1; 2; t), the d = 4 two-coefficient moment, is
/// decreasing for p in (0, 2) and increasing for p in (2, 3).
pub fn hyp2f1_monotone() -> Check {
    let cfg = SeriesConfig::default();
    for p in [0.3, 1.0, 1.9, 2.1, 2.5, 2.9] {
        let vals: Vec<f64> = linspace(0.0, 0.999, 200)
            .iter()
            .map(|&t| hyp2f1(p / 2.0, p / 2.0 - 1.0, 2.0, t, &cfg).unwrap())
            .collect();
        let up = p > 2.0;
        for w in vals.windows(2) {
            ensure((w[1] > w[0]) == up, || format!("2F1 monotonicity at p = {p}"))?;
        }
    }
    Ok(())
}

pub fn constants_at_two() -> Check {
    for d in 1..=10 {
        let a = two_point_constant(d, 2.0).map_err(e)?;
        let b = gaussian_constant(d, 2.0).map_err(e)?;
        ensure((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12, || format!("d = {d}: {a} {b}"))?;
    }
    Ok(())
}

/// C₂(p) = 2^{p/2} κ_{p,4} F(p, 2).
pub fn two_point_moment_from_quadrature(ps: &[f64], tol: f64) -> Check {
    for &p in ps {
        let f = bessel_power_integral(PowerParams { p, s: 2.0 }, &QuadratureConfig::default()).map_err(e)?;
        let k = normalizers(p, 4).map_err(e)?.radial;
        let lhs = 2f64.powf(p / 2.0) * k * f.value;
        let c2 = two_point_neg_moment(p).map_err(e)?;
        ensure((lhs - c2).abs() <= tol, || format!("p = {p}: {lhs} vs {c2}"))?;
    }
    Ok(())
}

pub fn ratio_log_convex_increasing() -> Check {
    let ps = linspace(2.0, 3.0 - 1e-3, 200);
    let l: Vec<f64> = ps.iter().map(|&p| two_point_ratio(p).unwrap().ln()).collect();
    for w in l.windows(2) {
        ensure(w[1] > w[0], || "D not increasing".into())?;
    }
    for w in l.windows(3) {
        ensure(w[0] - 2.0 * w[1] + w[2] >= -1e-10, || "ln D not convex".into())?;
    }
    Ok(())
}

pub fn constant_order() -> Check {
    for p in linspace(0.01, 1.99, 100) {
        ensure(two_point_neg_moment(p).unwrap() < gaussian_neg_moment(p).unwrap(), || format!("C2 >= Cinf at {p}"))?;
    }
    for p in linspace(2.01, 2.99, 100) {
        ensure(two_point_neg_moment(p).unwrap() > gaussian_neg_moment(p).unwrap(), || format!("C2 <= Cinf at {p}"))?;
    }
    Ok(())
}

pub fn certified_dominates_quadrature() -> Check {
    let cfg = QuadratureConfig::default();
    let cases = [
        (BoundPlan::MonotoneToFive, 8.0 / 3.0, linspace(0.8, 2.0, 7), 100),
        (BoundPlan::SeriesMonotoneMidpoint, 1.3, linspace(0.01, 0.25, 7), 200),
    ];
    for (plan, s, ps, m) in cases {
        for p in ps {
            for rel in [Relaxation::Tight, Relaxation::Published] {
                let b = certified_upper_bound(p, s, m, plan, rel).map_err(e)?.bound;
                let f = bessel_power_integral(PowerParams { p, s }, &cfg).map_err(e)?.value;
                ensure(f <= b + 1e-12, || format!("{plan:?} {rel:?} p = {p}: F = {f} > {b}"))?;
            }
        }
    }
    Ok(())
}

/// ∫|jj₁|² t^{p−1} <= 2^{p−1}Γ(p/2) on (0, 2].
pub fn square_integral_bound() -> Check {
    let cfg = QuadratureConfig::default();
    for p in linspace(0.05, 2.0, 40) {
        let f = bessel_power_integral(PowerParams { p, s: 2.0 }, &cfg).map_err(e)?.value;
        let g = 2f64.powf(p - 1.0) * gamma(p / 2.0).map_err(e)?;
        ensure(f <= g + 1e-10, || format!("p = {p}: {f} > {g}"))?;
    }
    Ok(())
}

pub fn gaussian_scaling() -> Check {
    for p in [0.1, 1.0, 2.5] {
        for s in [1.3, 2.0, 7.0] {
            let a = gaussian_integral(PowerParams { p, s }).map_err(e)?;
            let b = s.powf(-p / 2.0) * gaussian_integral(PowerParams { p, s: 1.0 }).map_err(e)?;
            ensure(((a - b) / a).abs() < 1e-14, || format!("scaling at ({p}, {s})"))?;
        }
    }
    Ok(())
}

/// F(p, s) <= F(p, 2)^{(8−3s)/2} F(p, 8/3)^{(3s−6)/2} on [2, 8/3].
pub fn holder_interpolation() -> Check {
    let cfg = QuadratureConfig::default();
    for p in [1.0, 1.5] {
        let f = |s: f64| bessel_power_integral(PowerParams { p, s }, &cfg).map(|r| r.value);
        let f2 = f(2.0).map_err(e)?;
        let f83 = f(8.0 / 3.0).map_err(e)?;
        for s in linspace(2.0, 8.0 / 3.0, 12) {
            let bound = f2.powf((8.0 - 3.0 * s) / 2.0) * f83.powf((3.0 * s - 6.0) / 2.0);
            let v = f(s).map_err(e)?;
            ensure(v <= bound * (1.0 + 1e-8), || format!("Hölder at p = {p}, s = {s}: {v} > {bound}"))?;
        }
    }
    Ok(())
}

/// e^{−p(s−2)/4} <= s^{−p/2} 2^{p/2} for s >= 2.
pub fn log_linear_bound() -> Check {
    for p in linspace(0.01, 3.0, 40) {
        for s in linspace(2.0, 40.0, 200) {
            let l = (-p * (s - 2.0) / 4.0).exp();
            let r = (2.0 / s).powf(p / 2.0);
            ensure(l <= r * (1.0 + 1e-15), || format!("at ({p}, {s})"))?;
        }
    }
    Ok(())
}

pub fn verifiers_deterministic() -> Check {
    let cfg = GridConfig { per_axis: 6, fine_per_axis: 20, ..GridConfig::default() };
    let a = verify::verify_u_less_g(UCase::Ii, &cfg).map_err(e)?;
    let b = verify::verify_u_less_g(UCase::Ii, &cfg).map_err(e)?;
    ensure(a == b, || "u_less_g report changed between runs".into())?;
    let a = verify::verify_ind_base(&cfg).map_err(e)?;
    ensure(a == verify::verify_ind_base(&cfg).map_err(e)?, || "ind_base report changed".into())
}

pub fn crossing_pair_never_passes() -> Check {
    let pair = verify::ConvexPair {
        lower: Box::new(|x| Ok(x * x + 0.01)),
        upper: Box::new(|x| Ok(x * x)),
        upper_derivative: None,
        breakpoints: vec![0.0, 0.5, 1.0],
        anchors: None,
    };
    let r = verify::tangent_chord_dominates("crossing", &pair).map_err(e)?;
    ensure(!r.passed, || "crossing pair passed".into())
}

pub fn q_star_unique_and_located() -> Check {
    for d in 1..=12 {
        let r = q_star(d, 1e-12).map_err(|x| format!("d = {d}: {x}"))?;
        ensure(r.residual <= 1e-10, || format!("d = {d} residual {}", r.residual))?;
        if d >= 5 {
            let df = d as f64;
            ensure(r.q_star > -(df - 1.0) && r.q_star < -(df - 2.0), || format!("d = {d}: q* = {}", r.q_star))?;
        }
    }
    Ok(())
}

pub fn h_tilde_convex() -> Check {
    for d in [5, 10, 20] {
        let k = 1e-3;
        for x in linspace(0.01, 0.99, 99) {
            let dd = (h_tilde(d, x + k).unwrap() - 2.0 * h_tilde(d, x).unwrap() + h_tilde(d, x - k).unwrap()) / (k * k);
            ensure(dd > 0.06 * (1.0 - 1e-3), || format!("d = {d}, x = {x}: {dd}"))?;
        }
    }
    Ok(())
}

pub fn h_sign_opposite() -> Check {
    for d in [5, 7, 10] {
        let df = d as f64;
        for q in linspace(-(df - 1.0) + 1e-3, -1e-3, 60) {
            let diff = two_point_constant(d, q).unwrap() - gaussian_constant(d, q).unwrap();
            ensure(h(d, q).unwrap() * diff < 0.0, || format!("d = {d}, q = {q}"))?;
        }
    }
    Ok(())
}

pub fn sampling_reproducible() -> Check {
    let q = MomentQuery::new(4, -0.7, &[0.5, 0.5, 0.7071067811865476]);
    let a = estimate_moment(&q, 20_000, 42).map_err(e)?;
    ensure(a == estimate_moment(&q, 20_000, 42).map_err(e)?, || "stats differ".into())
}

/// ‖S‖_{q₁} <= ‖S‖_{q₂} + 4σ for q₁ < q₂, all on the same samples.
pub fn norm_monotone(n: usize) -> Check {
    let coeffs = [0.6, 0.48, 0.64];
    let qs = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0];
    let mut norms = Vec::new();
    for &q in &qs {
        let s = estimate_moment(&MomentQuery::new(4, q, &coeffs), n, 17).map_err(e)?;
        let v = s.estimate.powf(1.0 / q);
        let sd = (v / q / s.estimate).abs() * s.std_error;
        norms.push((v, sd));
    }
    for w in norms.windows(2) {
        let sd = (w[0].1 * w[0].1 + w[1].1 * w[1].1).sqrt();
        ensure(w[0].0 <= w[1].0 + 4.0 * sd, || format!("norms not monotone: {norms:?}"))?;
    }
    Ok(())
}

/// E|S|^{-2} >= 1 for unit coefficient vectors.
pub fn jensen_floor(count: usize) -> Check {
    let cfg = QuadratureConfig::default();
    for a in random_unit_vectors(count, 2, 4, 23).map_err(e)? {
        let m = negative_moment(&MomentQuery::new(4, -2.0, &a), &cfg).map_err(e)?;
        ensure(m.value >= 1.0 - m.error, || format!("{a:?}: {}", m.value))?;
    }
    Ok(())
}

/// E|√x ξ₁ + √(1−x) ξ₂|^q is smallest at x = 1/2 for 0 < q < 2.
pub fn equal_split_minimizes() -> Check {
    let cfg = SeriesConfig::default();
    for d in [2u32, 3, 4, 5] {
        let df = d as f64;
        for q in [0.5, 1.0, 1.5] {
            let f = |x: f64| {
                x.powf(q / 2.0) * hyp2f1(-q / 2.0, (-q - df + 2.0) / 2.0, df / 2.0, (1.0 - x) / x, &cfg).unwrap()
            };
            let mid = f(0.5);
            for x in linspace(0.51, 1.0, 50) {
                ensure(mid <= f(x), || format!("d = {d}, q = {q}, x = {x}"))?;
            }
        }
    }
    Ok(())
}

/// Each property check by name, run in order by criterion 10.
pub fn all_properties() -> Vec<(&'static str, fn() -> Check)> {
    vec![
        ("digamma recurrence", digamma_recurrence),
        ("gamma recurrence", gamma_recurrence),
        ("|jj1| <= 1", jj_bounded),
        ("quartic envelope", quartic_envelope),
        ("power envelope", power_envelope),
        ("tail envelope", tail_envelope),
        ("Pochhammer duplication", pochhammer_duplication),
        ("2F1 monotone in t", hyp2f1_monotone),
        ("constants equal 1 at q = 2", constants_at_two),
        ("C2 from quadrature", || two_point_moment_from_quadrature(&[0.5, 1.0, 1.5, 2.5], 1e-8)),
        ("D increasing and log-convex", ratio_log_convex_increasing),
        ("C2 vs Cinf ordering", constant_order),
        ("certified bound dominates F", certified_dominates_quadrature),
        ("square integral bound", square_integral_bound),
        ("Gaussian scaling", gaussian_scaling),
        ("Hölder interpolation", holder_interpolation),
        ("log-linear exponential bound", log_linear_bound),
        ("verifiers deterministic", verifiers_deterministic),
        ("crossing pair rejected", crossing_pair_never_passes),
        ("q* unique and located", q_star_unique_and_located),
        ("h~ convex on (0, 1)", h_tilde_convex),
        ("sign of h_d", h_sign_opposite),
        ("sampling reproducible", sampling_reproducible),
        ("norm monotone in q", || norm_monotone(200_000)),
        ("Jensen floor", || jensen_floor(30)),
        ("equal split minimizes", equal_split_minimizes),
    ]
}
