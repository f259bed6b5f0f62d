//! Command-line front end: argument types, verb dispatch and the fixed
//! CSV layouts of the reproduced tables.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use khinchin::constants::{sharp_constant, MomentQuery};
use khinchin::phase::{self, PhaseTransitionResult};
use khinchin::quad::{negative_moment, product_moment, QuadratureConfig};
use khinchin::sample::{estimate_moment, polydisc_slice_volume};
use khinchin::verify::{self, ChartPoint, GridConfig, TangentTable, UCase, VerificationReport};
use khinchin::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "khinchin", version, about = "Sharp Khinchin constants for sphere-uniform sums")]
pub struct Cli {
    /// Output format; tables and qstar default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "KHINCHIN_THREADS")]
    pub threads: Option<usize>,
    /// Random seed for Monte Carlo verbs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-point and Gaussian constants c_{d,2}(q), c_{d,∞}(q) and their minimum.
    Constants {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
    },
    /// Phase-transition points q_d* for a range of dimensions.
    Qstar {
        #[arg(long, default_value_t = 1)]
        d_min: u32,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// E|Σ a_k ξ_k|^{-p} by quadrature, closed form and Monte Carlo.
    Moment {
        #[arg(long, default_value_t = 4)]
        d: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Run a named verifier and print its report.
    Verify {
        #[arg(long, value_enum)]
        lemma: Lemma,
        /// Dimension for two_coeff_bounds, bisubharmonic and appendix_claims.
        #[arg(long)]
        d: Option<u32>,
        /// Order for two_coeff_bounds and bisubharmonic.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
        deltas: Vec<f64>,
        #[arg(long)]
        per_axis: Option<usize>,
        #[arg(long)]
        fine_per_axis: Option<usize>,
    },
    /// Volume of the polydisc section D^n ∩ a^⊥ with its extremal bounds.
    Slice {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<f64>,
    },
    /// Monte Carlo estimate of E|Σ a_k ξ_k|^q with q = -p.
    Mc {
        #[arg(long, default_value_t = 4)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
    },
    /// Regenerate the q* table (1), the tangent tables (2, 3), or a long-format chart of H.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Lemma {
    HRegions,
    HTildeRegion,
    #[value(name = "u_less_g_i")]
    ULessGI,
    #[value(name = "u_less_g_ii")]
    ULessGIi,
    #[value(name = "u_less_g_iii")]
    ULessGIii,
    #[value(name = "u_less_g_tilde")]
    ULessGTilde,
    IndBase,
    TwoCoeffBounds,
    Bisubharmonic,
    SmallLemmas,
    Table2,
    Table3,
    InterpolationTilde,
    AppendixClaims,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    /// Sign chart of H (and H̃ for p > 2) on (0, 3) x (1.05, 4).
    Chart,
}

pub enum Failure {
    Invalid(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numeric(format!("csv: {e}"))
    }
}

pub struct Output {
    pub text: String,
    pub verification_failed: bool,
}

type Outcome = std::result::Result<Output, Failure>;

fn ok(text: String) -> Outcome {
    Ok(Output { text, verification_failed: false })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_string(rows: Vec<Vec<String>>) -> std::result::Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Numeric(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

pub fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Invalid("threads must be positive".into()));
        }
        // a pool may already exist when run is called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Constants { d, q } => {
            let c = sharp_constant(*d, *q)?;
            match fmt(Format::Json) {
                Format::Json => ok(json(&c)),
                Format::Csv => ok(csv_string(vec![
                    vec!["d".into(), "q".into(), "c_two".into(), "c_inf".into(), "min".into(), "status".into()],
                    vec![
                        d.to_string(),
                        q.to_string(),
                        format!("{:.12}", c.two_point),
                        format!("{:.12}", c.gaussian),
                        format!("{:.12}", c.min),
                        format!("{:?}", c.status).to_lowercase(),
                    ],
                ])?),
            }
        }
        Command::Qstar { d_min, d_max, tol } => {
            if d_min > d_max || *d_min == 0 {
                return Err(Failure::Invalid(format!("bad dimension range {d_min}..{d_max}")));
            }
            let ds: Vec<u32> = (*d_min..=*d_max).collect();
            let rows = phase::table1(&ds, *tol)?;
            match fmt(Format::Csv) {
                Format::Json => ok(json(&rows)),
                Format::Csv => ok(table1_csv(&rows)?),
            }
        }
        Command::Moment { d, p, coeffs, n } => moment(*d, *p, coeffs, *n, cli.seed, fmt(Format::Json)),
        Command::Verify { lemma, d, p, deltas, per_axis, fine_per_axis } => {
            let mut cfg = GridConfig::default();
            if let Some(k) = per_axis {
                cfg.per_axis = *k;
            }
            if let Some(k) = fine_per_axis {
                cfg.fine_per_axis = *k;
            }
            let reports = run_lemma(*lemma, *d, *p, deltas, &cfg)?;
            let failed = reports.iter().any(|r| !r.passed);
            let text = match fmt(Format::Json) {
                Format::Json => json(&reports),
                Format::Csv => reports_csv(&reports)?,
            };
            Ok(Output { text, verification_failed: failed })
        }
        Command::Slice { coeffs } => {
            let v = polydisc_slice_volume(coeffs, &QuadratureConfig::default())?;
            let n = coeffs.len() as i32;
            let s = SliceOutput {
                n: coeffs.len(),
                volume: v,
                lower: PI.powi(n - 1),
                upper: 2.0 * PI.powi(n - 1),
            };
            match fmt(Format::Json) {
                Format::Json => ok(json(&s)),
                Format::Csv => ok(csv_string(vec![
                    vec!["n".into(), "volume".into(), "lower".into(), "upper".into()],
                    vec![s.n.to_string(), format!("{:.12}", s.volume), format!("{:.12}", s.lower), format!("{:.12}", s.upper)],
                ])?),
            }
        }
        Command::Mc { d, p, coeffs, n } => {
            let s = estimate_moment(&MomentQuery::new(*d, -p, coeffs), *n, cli.seed)?;
            match fmt(Format::Json) {
                Format::Json => ok(json(&s)),
                Format::Csv => ok(csv_string(vec![
                    vec!["n_samples".into(), "estimate".into(), "std_error".into(), "method".into(), "seed".into()],
                    vec![
                        s.n_samples.to_string(),
                        format!("{:.10}", s.estimate),
                        format!("{:.3e}", s.std_error),
                        serde_json::to_value(s.method).unwrap().as_str().unwrap().to_string(),
                        s.seed.to_string(),
                    ],
                ])?),
            }
        }
        Command::Tables { which } => tables(*which, fmt(Format::Csv)),
    }
}

#[derive(Serialize)]
struct SliceOutput {
    n: usize,
    volume: f64,
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct MomentOutput {
    d: u32,
    p: f64,
    coeffs: Vec<f64>,
    quadrature: Option<f64>,
    quadrature_error: Option<f64>,
    quadrature_note: Option<String>,
    exact: Option<f64>,
    exact_method: Option<String>,
    monte_carlo: khinchin::sample::SampleStats,
}

fn moment(d: u32, p: f64, coeffs: &[f64], n: usize, seed: u64, format: Format) -> Outcome {
    let q = MomentQuery::new(d, -p, coeffs);
    q.validate()?;
    let cfg = QuadratureConfig::default();
    let (quadrature, quadrature_error, quadrature_note) = match product_moment(&q, &cfg) {
        Ok(r) => (Some(r.value), Some(r.error), None),
        Err(Error::Domain(m)) => return Err(Failure::Invalid(m)),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let (exact, exact_method) = match negative_moment(&q, &cfg) {
        Ok(v) => (Some(v.value), Some(serde_json::to_value(v.method).unwrap().as_str().unwrap().to_string())),
        Err(_) => (None, None),
    };
    let monte_carlo = estimate_moment(&q, n, seed)?;
    let out = MomentOutput {
        d,
        p,
        coeffs: coeffs.to_vec(),
        quadrature,
        quadrature_error,
        quadrature_note,
        exact,
        exact_method,
        monte_carlo,
    };
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.12}")).unwrap_or_default();
    match format {
        Format::Json => ok(json(&out)),
        Format::Csv => ok(csv_string(vec![
            vec!["d".into(), "p".into(), "quadrature".into(), "exact".into(), "mc_estimate".into(), "mc_std_error".into()],
            vec![
                d.to_string(),
                p.to_string(),
                opt(out.quadrature),
                opt(out.exact),
                format!("{:.10}", out.monte_carlo.estimate),
                format!("{:.3e}", out.monte_carlo.std_error),
            ],
        ])?),
    }
}

fn need<T>(x: Option<T>, what: &str, lemma: &str) -> std::result::Result<T, Failure> {
    x.ok_or_else(|| Failure::Invalid(format!("--{what} is required for {lemma}")))
}

pub fn run_lemma(
    lemma: Lemma,
    d: Option<u32>,
    p: Option<f64>,
    deltas: &[f64],
    cfg: &GridConfig,
) -> std::result::Result<Vec<VerificationReport>, Failure> {
    Ok(match lemma {
        Lemma::HRegions => verify::verify_h_regions(cfg)?,
        Lemma::HTildeRegion => vec![verify::verify_h_tilde_region(cfg)?],
        Lemma::ULessGI => vec![verify::verify_u_less_g(UCase::I, cfg)?],
        Lemma::ULessGIi => vec![verify::verify_u_less_g(UCase::Ii, cfg)?],
        Lemma::ULessGIii => vec![verify::verify_u_less_g(UCase::Iii, cfg)?],
        Lemma::ULessGTilde => vec![verify::verify_u_less_g(UCase::Tilde, cfg)?],
        Lemma::IndBase => vec![verify::verify_ind_base(cfg)?],
        Lemma::TwoCoeffBounds => vec![verify::verify_two_coeff_bounds(
            need(d, "d", "two_coeff_bounds")?,
            need(p, "p", "two_coeff_bounds")?,
            cfg,
        )?],
        Lemma::Bisubharmonic => vec![verify::verify_bisubharmonic(
            need(d, "d", "bisubharmonic")?,
            need(p, "p", "bisubharmonic")?,
            deltas,
            cfg,
        )?],
        Lemma::SmallLemmas => vec![verify::verify_small_lemmas(cfg)?],
        Lemma::Table2 => vec![verify::table2(cfg)?.1],
        Lemma::Table3 => vec![verify::table3(cfg)?.1],
        Lemma::InterpolationTilde => vec![verify::verify_interpolation_tilde(cfg)?],
        Lemma::AppendixClaims => {
            vec![phase::verify_appendix_claims(need(d, "d", "appendix_claims")?, cfg)?]
        }
    })
}

fn reports_csv(reports: &[VerificationReport]) -> std::result::Result<String, Failure> {
    let mut rows = vec![vec!["lemma_id".into(), "passed".into(), "min_margin".into(), "degenerate".into()]];
    for r in reports {
        rows.push(vec![
            r.lemma_id.clone(),
            r.passed.to_string(),
            format!("{:.6e}", r.min_margin),
            r.degenerate.to_string(),
        ]);
    }
    csv_string(rows)
}

/// The q* table as CSV: d, q_star (6 decimals), residual, iterations.
pub fn table1_csv(rows: &[PhaseTransitionResult]) -> std::result::Result<String, Failure> {
    let mut out = vec![vec!["d".into(), "q_star".into(), "residual".into(), "iterations".into()]];
    for r in rows {
        out.push(vec![
            r.d.to_string(),
            format!("{:.6}", r.q_star),
            format!("{:.3e}", r.residual),
            r.iterations.to_string(),
        ]);
    }
    csv_string(out)
}

/// Tables 2 and 3 as CSV: one column per tangent; rows with the printed
/// lower bounds and the computed margins at both ends, in scaled units.
pub fn tangent_table_csv(t: &TangentTable) -> std::result::Result<String, Failure> {
    let mut header = vec!["row".to_string()];
    header.extend(t.index.iter().map(|i| i.to_string()));
    let row = |name: &str, v: &[f64], digits: usize| {
        let mut r = vec![name.to_string()];
        r.extend(v.iter().map(|x| format!("{x:.digits$}")));
        r
    };
    csv_string(vec![
        header,
        row("bound_left", &t.left_bound, 1),
        row("margin_left", &t.left, 3),
        row("bound_right", &t.right_bound, 1),
        row("margin_right", &t.right, 3),
    ])
}

fn chart_csv(points: &[ChartPoint]) -> std::result::Result<String, Failure> {
    let mut rows = vec![vec!["p".into(), "s".into(), "value".into(), "note".into()]];
    for c in points {
        rows.push(vec![
            format!("{:.4}", c.p),
            format!("{:.4}", c.s),
            c.value.map(|v| format!("{v:.6e}")).unwrap_or_default(),
            c.note.clone().unwrap_or_default(),
        ]);
    }
    csv_string(rows)
}

fn tables(which: Which, format: Format) -> Outcome {
    let cfg = GridConfig::default();
    match which {
        Which::One => {
            let ds: Vec<u32> = (1..=12).collect();
            let rows = phase::table1(&ds, 1e-12)?;
            match format {
                Format::Json => ok(json(&rows)),
                Format::Csv => ok(table1_csv(&rows)?),
            }
        }
        Which::Two | Which::Three => {
            let (t, report) = if which == Which::Two { verify::table2(&cfg)? } else { verify::table3(&cfg)? };
            let text = match format {
                Format::Json => json(&(&t, &report)),
                Format::Csv => tangent_table_csv(&t)?,
            };
            Ok(Output { text, verification_failed: !report.passed })
        }
        Which::Chart => {
            let pts = verify::h_sign_chart((0.05, 2.95), (1.05, 4.0), 30, &cfg.quad)?;
            match format {
                Format::Json => ok(json(&pts)),
                Format::Csv => ok(chart_csv(&pts)?),
            }
        }
    }
}
