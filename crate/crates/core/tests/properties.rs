mod common;

use common::*;
use khinchin::constants::{gaussian_neg_moment, two_point_neg_moment, MomentQuery};
use khinchin::quad::{envelope_bound, gaussian_integral, PowerParams};
use khinchin::specfun::{digamma, gamma, log_gamma};
use khinchin::verify::PhiFunction;
use proptest::prelude::*;

#[test]
fn grid_properties() {
    let mut failures = Vec::new();
    for (name, check) in all_properties() {
        if let Err(msg) = check() {
            failures.push(format!("{name}: {msg}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

proptest! {
    #[test]
    fn digamma_steps_by_reciprocal(x in 0.1f64..100.0) {
        let r = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(r.abs() <= 1e-10);
    }

    #[test]
    fn gamma_steps_by_factor(x in 0.1f64..30.0) {
        let a = gamma(x + 1.0).unwrap();
        prop_assert!((a - x * gamma(x).unwrap()).abs() <= 1e-12 * a);
        prop_assert!((log_gamma(x).unwrap() - gamma(x).unwrap().ln()).abs() <= 1e-12 * log_gamma(x).unwrap().abs().max(1.0));
    }

    #[test]
    fn jj_within_envelopes(t in 0.0f64..200.0) {
        let v = jj1(t).abs();
        prop_assert!(v <= 1.0);
        if t <= 4.0 {
            prop_assert!(v <= (-t * t / 8.0 - t.powi(4) / 384.0).exp() + 4.0 * f64::EPSILON);
        }
        if t >= 1.01 {
            prop_assert!(v <= (8.0 / std::f64::consts::PI).sqrt() / (t * (t * t - 1.0).powf(0.25)));
        }
    }

    #[test]
    fn exponential_below_power(p in 0.01f64..3.0, s in 2.0f64..100.0) {
        prop_assert!((-p * (s - 2.0) / 4.0).exp() <= (2.0 / s).powf(p / 2.0) * (1.0 + 1e-15));
    }

    #[test]
    fn gaussian_integral_scales(p in 0.05f64..3.0, s in 1.0f64..20.0) {
        let a = gaussian_integral(PowerParams { p, s }).unwrap();
        let b = s.powf(-p / 2.0) * gaussian_integral(PowerParams { p, s: 1.0 }).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-13);
    }

    #[test]
    fn envelope_bound_below_gaussian(p in 0.001f64..0.8, s in 2.0f64..40.0) {
        let q = PowerParams { p, s };
        prop_assert!(envelope_bound(q).unwrap() < gaussian_integral(q).unwrap());
    }

    #[test]
    fn extremizer_order_switches_at_two(p in 0.01f64..2.99) {
        prop_assume!((p - 2.0).abs() > 1e-3);
        let (c2, cg) = (two_point_neg_moment(p).unwrap(), gaussian_neg_moment(p).unwrap());
        prop_assert_eq!(c2 < cg, p < 2.0);
    }

    #[test]
    fn reflected_phi_below_phi(p in 0.01f64..5.0, x in 0.0f64..10.0) {
        let f = PhiFunction::new(p).unwrap();
        prop_assert!(f.reflected(x) <= f.phi(x) + 1e-15);
    }

    #[test]
    fn magnitudes_sorted_and_nonzero(v in proptest::collection::vec(-5.0f64..5.0, 1..8)) {
        let q = MomentQuery::new(4, -1.0, &v);
        let m = q.magnitudes();
        prop_assert!(m.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(m.iter().all(|&a| a > 0.0));
        let n2: f64 = m.iter().map(|a| a * a).sum();
        prop_assert!((n2.sqrt() - q.norm()).abs() <= 1e-12 * q.norm().max(1.0));
    }
}
