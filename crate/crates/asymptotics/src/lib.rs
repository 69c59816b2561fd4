//! Critical points, limit-law parameters and coefficient statistics for winding-tracked
//! walk generating functions.

mod critical;
mod minpoly;
mod moments;
mod stats;

use thiserror::Error;

pub use critical::{
    find_critical_point, find_polynomial_critical_point, refine_critical_point, refine_polynomial_critical_point,
    CriticalPoint, RESIDUAL_TOLERANCE,
};
pub use minpoly::{eval_poly, minimal_poly_check, real_roots, MinimalPolyReport};
pub use moments::{growth_and_moments, growth_and_moments_polynomial, LimitLaw, DIFF_AGREEMENT, DIFF_STEP};
pub use stats::{
    expected_returns, exponent_fit, gaussian_profile_check, growth_estimate, growth_rate_compare, ln_big, ratio_f64,
    variance_sequence, ExponentFit, VarianceReport, MIN_FIT_TERMS,
};

/// `m⁴ - 2m³ - 11m² + 12m + 4`, whose largest root is the growth rate for `G(2,3)`.
pub const TREFOIL_GROWTH_POLY: [f64; 5] = [1.0, -2.0, -11.0, 12.0, 4.0];

/// `452s⁴ - 904s³ + 512s² - 60s - 1`, whose smallest positive root is the winding
/// variance for `G(2,3)`.
pub const TREFOIL_VARIANCE_POLY: [f64; 5] = [452.0, -904.0, 512.0, -60.0, -1.0];

/// `m² - 2m - 7`, with largest root `1 + 2√2`.
pub const BRAID_GROWTH_POLY: [f64; 3] = [1.0, -2.0, -7.0];

/// Degree-11 polynomial whose largest positive root is the growth rate of `F00(z, 1)`
/// for B3 with generators `a` and `ab`.
pub const AXA_GROWTH_POLY: [f64; 12] = [
    4.0, 24.0, -88.0, -763.0, -130.0, 6598.0, 9136.0, -8940.0, -12888.0, 7788.0, 1192.0, -108.0,
];

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("the value iteration never diverged for z <= 1")]
    NoBracket,
    #[error("Newton's method stopped with residual {residual:e} at {last:?}")]
    NewtonFailed { last: Vec<f64>, residual: f64 },
    #[error("the system is not strongly connected")]
    NotStronglyConnected,
    #[error("critical point is not positive")]
    NotPositive,
    #[error("finite differences disagree between step sizes ({first:e}, {second:e})")]
    UnstableDerivative { first: f64, second: f64 },
    #[error("{have} usable terms, at least {need} required")]
    TooFewTerms { have: usize, need: usize },
    #[error("coefficient f_({0},0) is not positive")]
    EmptyCentre(usize),
    #[error("coefficients at order {0} are not symmetric in q")]
    Asymmetric(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
