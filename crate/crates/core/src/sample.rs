//! Monte Carlo estimates of moments of Σ a_k ξ_k with ξ_k uniform on the
//! sphere, and the statistical checks built on them.
//!
//! Samples are drawn in [`BLOCKS`] blocks, block b from ChaCha8 stream b of
//! the given seed, so results are bit-identical across runs and thread
//! counts.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::constants::{gaussian_neg_moment, two_point_neg_moment, MomentQuery};
use crate::error::{domain, Result};
use crate::quad::{negative_moment, QuadratureConfig};

pub const BLOCKS: usize = 64;
const MIN_SAMPLES: usize = 2 * BLOCKS;
// standard error of the median relative to the mean for normal data
const MEDIAN_EFFICIENCY: f64 = 1.253_314_137_315_500_3;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn fill_sphere<R: Rng + ?Sized>(v: &mut [f64], rng: &mut R) {
    loop {
        let mut s = 0.0;
        for x in v.iter_mut() {
            *x = rng.sample(StandardNormal);
            s += *x * *x;
        }
        if s > 0.0 {
            let r = s.sqrt();
            v.iter_mut().for_each(|x| *x /= r);
            return;
        }
    }
}

/// A uniform point of S^{d-1} (normalized Gaussian vector).
pub fn sample_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Vec<f64>> {
    if d == 0 {
        return domain("dimension must be at least 1");
    }
    let mut v = vec![0.0; d];
    fill_sphere(&mut v, rng);
    Ok(v)
}

/// A uniform point of the unit ball B^d: the first d coordinates of a
/// uniform point of S^{d+1}.
pub fn sample_ball<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Vec<f64>> {
    let mut v = sample_sphere(d + 2, rng)?;
    v.truncate(d);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Sphere,
    Ball,
}

fn block_sizes(n: usize) -> impl Iterator<Item = usize> {
    (0..BLOCKS).map(move |b| n / BLOCKS + usize::from(b < n % BLOCKS))
}

/// |Σ a_k X_k| for `n` draws, grouped by block. X_k lives in R^dim and is
/// uniform on the sphere, or on the ball when `source` is Ball (drawn as a
/// projection from S^{dim+1}).
fn sample_norms(coeffs: &[f64], dim: usize, source: Source, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let sizes: Vec<usize> = block_sizes(n).collect();
    let draw_dim = if source == Source::Ball { dim + 2 } else { dim };
    sizes
        .par_iter()
        .enumerate()
        .map(|(b, &m)| {
            let mut rng = stream(seed, b as u64);
            let mut x = vec![0.0; draw_dim];
            let mut s = vec![0.0; dim];
            let mut out = Vec::with_capacity(m);
            for _ in 0..m {
                s.iter_mut().for_each(|v| *v = 0.0);
                for &a in coeffs {
                    fill_sphere(&mut x, &mut rng);
                    for (si, xi) in s.iter_mut().zip(&x) {
                        *si += a * xi;
                    }
                }
                out.push(s.iter().map(|v| v * v).sum::<f64>().sqrt());
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    PlainMean,
    MedianOfMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub n_samples: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub method: EstimateMethod,
    pub seed: u64,
    pub blocks: usize,
    pub warning: Option<String>,
}

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

/// Moment statistics of |S|^q from per-block norms. With infinite variance
/// the median of block means is reported, its error widened by the gap to
/// the pooled mean.
fn moment_stats(norms: &[Vec<f64>], q: f64, finite_variance: bool, seed: u64) -> SampleStats {
    let n: usize = norms.iter().map(Vec::len).sum();
    let block_means: Vec<f64> = norms
        .iter()
        .map(|b| b.iter().map(|r| r.powf(q)).sum::<f64>() / b.len() as f64)
        .collect();
    let pooled = norms
        .iter()
        .zip(&block_means)
        .map(|(b, m)| m * b.len() as f64)
        .sum::<f64>()
        / n as f64;
    if finite_variance {
        let mut ss = 0.0;
        for b in norms {
            for r in b {
                let v = r.powf(q) - pooled;
                ss += v * v;
            }
        }
        let sd = (ss / (n as f64 - 1.0)).sqrt();
        return SampleStats {
            n_samples: n,
            estimate: pooled,
            std_error: sd / (n as f64).sqrt(),
            method: EstimateMethod::PlainMean,
            seed,
            blocks: norms.len(),
            warning: None,
        };
    }
    let mut sorted = block_means.clone();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let (_, sd_blocks) = mean_sd(&block_means);
    let se = MEDIAN_EFFICIENCY * sd_blocks / (k as f64).sqrt();
    SampleStats {
        n_samples: n,
        estimate: median,
        std_error: (se * se + (median - pooled).powi(2)).sqrt(),
        method: EstimateMethod::MedianOfMeans,
        seed,
        blocks: k,
        warning: Some(format!(
            "|S|^{q} has infinite variance; median of {k} block means reported"
        )),
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return domain(format!("need at least {MIN_SAMPLES} samples, got {n}"));
    }
    Ok(())
}

/// Monte Carlo estimate of E|Σ a_k ξ_k|^q, ξ_k uniform on S^{d-1}. The
/// plain mean is used when 2q > −(d−1), median-of-means otherwise.
pub fn estimate_moment(query: &MomentQuery, n: usize, seed: u64) -> Result<SampleStats> {
    query.validate()?;
    check_samples(n)?;
    let d = query.d as f64;
    let norms = sample_norms(&query.coeffs, query.d as usize, Source::Sphere, n, seed);
    Ok(moment_stats(&norms, query.q, 2.0 * query.q > -(d - 1.0), seed))
}

/// The sharp d = 4 constant: C_∞(p) for p <= 2 and C₂(p) for 2 < p < 3.
pub fn sharp_neg_constant(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 3.0) {
        return domain(format!("the d = 4 constant needs 0 < p < 3, got {p}"));
    }
    if p <= 2.0 {
        gaussian_neg_moment(p)
    } else {
        two_point_neg_moment(p)
    }
}

/// z threshold for `comparisons` one-sided tests at a family-wise level
/// matching a single two-sided 4σ test.
pub fn bonferroni_z(comparisons: usize) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let alpha = 2.0 * (1.0 - normal.cdf(4.0));
    normal.inverse_cdf(1.0 - alpha / (2.0 * comparisons.max(1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KhinchinMethod {
    Exact,
    PlainMean,
    MedianOfMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KhinchinEntry {
    pub set: usize,
    pub p: f64,
    pub value: f64,
    pub std_error: f64,
    pub method: KhinchinMethod,
    pub bound: f64,
    /// (value − bound) / std_error, or the sign of value − bound for exact values.
    pub z: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KhinchinReport {
    pub d: u32,
    pub ps: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub z_threshold: f64,
    pub entries: Vec<KhinchinEntry>,
    pub violations: usize,
}

// tolerance for the exact routes, which may sit on the bound (extremizers)
const EXACT_SLACK: f64 = 1e-9;

/// Compares E|Σ a_k ξ_k|^{-p} with C(p)(Σ a_k²)^{-p/2} in d = 4 for every
/// coefficient set and every p. Sets with at most two non-zero entries are
/// evaluated exactly; larger ones by Monte Carlo, sharing samples across p.
pub fn check_khinchin(
    d: u32,
    ps: &[f64],
    coeff_sets: &[Vec<f64>],
    n: usize,
    seed: u64,
) -> Result<KhinchinReport> {
    if d != 4 {
        return domain(format!("the sharp constant is implemented for d = 4 only, got {d}"));
    }
    check_samples(n)?;
    for &p in ps {
        sharp_neg_constant(p)?;
    }
    let z_threshold = bonferroni_z(ps.len() * coeff_sets.len());
    let mut entries = Vec::new();
    for (i, coeffs) in coeff_sets.iter().enumerate() {
        let base = MomentQuery::new(d, -1.0, coeffs);
        base.validate()?;
        let norm = base.norm();
        let exact = base.magnitudes().len() <= 2;
        let norms = if exact {
            Vec::new()
        } else {
            sample_norms(coeffs, d as usize, Source::Sphere, n, seed.wrapping_add(i as u64))
        };
        for &p in ps {
            let bound = sharp_neg_constant(p)? * norm.powf(-p);
            let (value, std_error, method) = if exact {
                let q = MomentQuery::new(d, -p, coeffs);
                let v = negative_moment(&q, &QuadratureConfig::default())?;
                (v.value, v.error, KhinchinMethod::Exact)
            } else {
                let s = moment_stats(&norms, -p, -2.0 * p > -(d as f64 - 1.0), seed);
                let m = match s.method {
                    EstimateMethod::PlainMean => KhinchinMethod::PlainMean,
                    EstimateMethod::MedianOfMeans => KhinchinMethod::MedianOfMeans,
                };
                (s.estimate, s.std_error, m)
            };
            let (z, violation) = if exact {
                let gap = value - bound;
                (gap.signum(), gap > EXACT_SLACK * bound)
            } else {
                let z = (value - bound) / std_error;
                (z, z > z_threshold)
            };
            entries.push(KhinchinEntry { set: i, p, value, std_error, method, bound, z, violation });
        }
    }
    let violations = entries.iter().filter(|e| e.violation).count();
    Ok(KhinchinReport {
        d,
        ps: ps.to_vec(),
        n_samples: n,
        seed,
        z_threshold,
        entries,
        violations,
    })
}

/// `count` coefficient vectors of unit norm with between `min_len` and
/// `max_len` entries, |Gaussian| entries normalized.
pub fn random_unit_vectors(
    count: usize,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if min_len == 0 || min_len > max_len {
        return domain(format!("bad length range {min_len}..={max_len}"));
    }
    let mut rng = stream(seed, u64::MAX);
    Ok((0..count)
        .map(|_| {
            let len = rng.gen_range(min_len..=max_len);
            let mut v: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(StandardNormal).abs()).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= r);
            v
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallSphereReport {
    pub d: u32,
    pub q: f64,
    pub ball: SampleStats,
    pub sphere: SampleStats,
    pub ratio: f64,
    pub ratio_std_error: f64,
    pub expected: f64,
    pub z: f64,
    pub passed: bool,
}

/// E|Σ a_k U_k|^q = (d−2)/(d−2+q) · E|Σ a_k ξ_k|^q with U_k uniform on the
/// ball B^{d−2} and ξ_k uniform on S^{d−1}; both sides by Monte Carlo on
/// independent streams, compared at 4σ.
pub fn ball_sphere_identity(
    d: u32,
    q: f64,
    coeffs: &[f64],
    n: usize,
    seed: u64,
) -> Result<BallSphereReport> {
    if d < 3 {
        return domain(format!("ball-sphere identity needs d >= 3, got {d}"));
    }
    let df = d as f64;
    if q == 0.0 || !(q > -(df - 2.0)) || !q.is_finite() {
        return domain(format!("ball-sphere identity needs q > -(d-2), q != 0, got {q}"));
    }
    let query = MomentQuery::new(d, q, coeffs);
    query.validate()?;
    check_samples(n)?;
    let sphere = estimate_moment(&query, n, seed)?;
    let ball_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    let norms = sample_norms(coeffs, d as usize - 2, Source::Ball, n, ball_seed);
    let ball = moment_stats(&norms, q, 2.0 * q > -(df - 2.0), ball_seed);
    let ratio = ball.estimate / sphere.estimate;
    let ratio_std_error = ratio.abs()
        * ((ball.std_error / ball.estimate).powi(2) + (sphere.std_error / sphere.estimate).powi(2)).sqrt();
    let expected = (df - 2.0) / (df - 2.0 + q);
    let z = (ratio - expected) / ratio_std_error;
    Ok(BallSphereReport {
        d,
        q,
        ball,
        sphere,
        ratio,
        ratio_std_error,
        expected,
        z,
        passed: z.abs() <= 4.0,
    })
}

/// Volume of the central section D^n ∩ a^⊥ of the polydisc, a unit vector
/// in R^n (complex hyperplane, so the section is (2n−2)-dimensional).
pub fn polydisc_slice_volume(a: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if a.is_empty() || !((norm - 1.0).abs() <= 1e-12) {
        return domain(format!("slice direction must have unit norm, got {norm}"));
    }
    let m = negative_moment(&MomentQuery::new(4, -2.0, a), cfg)?;
    Ok(PI.powi(a.len() as i32 - 1) * m.value)
}
