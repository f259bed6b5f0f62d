//! Special functions: gamma family, normalized Bessel functions and the
//! Gauss hypergeometric series.

mod bessel;
mod gamma;
mod hyper;

pub use bessel::{
    bessel_j, bessel_modulus_series, bessel_phase, bessel_phase_derivative, jj, jj_derivative,
    jj_zeros, SERIES_CROSSOVER,
};
pub use gamma::{digamma, gamma, log_gamma, pochhammer, rgamma, trigamma, EULER_GAMMA};
pub use hyper::hyp2f1;

/// Stopping rule shared by the power series in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}
