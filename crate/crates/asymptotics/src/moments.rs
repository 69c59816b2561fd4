use cogrowth_algebraic::PolynomialEquation;
use cogrowth_system::EquationSystem;

use crate::critical::{
    find_critical_point, find_polynomial_critical_point, refine_critical_point, refine_polynomial_critical_point,
    CriticalPoint,
};
use crate::AsymptoticsError;

/// Finite-difference step in `q`.
pub const DIFF_STEP: f64 = 1e-3;
/// Largest allowed disagreement between the estimates at `h` and `h/2`.
pub const DIFF_AGREEMENT: f64 = 1e-4;

/// Growth, drift and variance of the winding in the limit law.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLaw {
    /// `1 / z_c(1)`.
    pub mu: f64,
    pub lambda: f64,
    pub sigma2: f64,
    /// `|D(h) - D(h/2)|` for the first and second derivative of `z_c`.
    pub lambda_error: f64,
    pub sigma2_error: f64,
    /// The critical point at `q = 1`.
    pub critical: CriticalPoint,
    /// Fitted polynomial exponent and amplitude, when a fit has been attached.
    pub alpha: Option<f64>,
    pub amplitude: Option<f64>,
}

impl LimitLaw {
    pub fn with_fit(mut self, alpha: f64, amplitude: f64) -> Self {
        self.alpha = Some(alpha);
        self.amplitude = Some(amplitude);
        self
    }
}

/// `λ = -z_c'/z_c` and `σ² = -z_c''/z_c + λ² + λ` at `q = 1` from central differences
/// at `h` and `h/2` combined by Richardson extrapolation.
fn moments(
    critical: CriticalPoint,
    zc: impl Fn(f64) -> Result<f64, AsymptoticsError>,
) -> Result<LimitLaw, AsymptoticsError> {
    let z1 = critical.z_c;
    let derivatives = |h: f64| -> Result<(f64, f64), AsymptoticsError> {
        let (zp, zm) = (zc(1.0 + h)?, zc(1.0 - h)?);
        Ok(((zp - zm) / (2.0 * h), (zp - 2.0 * z1 + zm) / (h * h)))
    };
    let (d1_h, d2_h) = derivatives(DIFF_STEP)?;
    let (d1_h2, d2_h2) = derivatives(DIFF_STEP / 2.0)?;
    let lambda_error = (d1_h - d1_h2).abs() / z1;
    let sigma2_error = (d2_h - d2_h2).abs() / z1;
    if lambda_error > DIFF_AGREEMENT || sigma2_error > DIFF_AGREEMENT {
        return Err(AsymptoticsError::UnstableDerivative {
            first: lambda_error,
            second: sigma2_error,
        });
    }
    let d1 = (4.0 * d1_h2 - d1_h) / 3.0;
    let d2 = (4.0 * d2_h2 - d2_h) / 3.0;
    let lambda = -d1 / z1;
    let sigma2 = -d2 / z1 + lambda * lambda + lambda;
    Ok(LimitLaw {
        mu: 1.0 / z1,
        lambda,
        sigma2,
        lambda_error,
        sigma2_error,
        critical,
        alpha: None,
        amplitude: None,
    })
}

/// The limit law of a strongly connected system.
pub fn growth_and_moments(system: &EquationSystem) -> Result<LimitLaw, AsymptoticsError> {
    let critical = find_critical_point(system, 1.0)?;
    let start = critical.clone();
    moments(critical, |q| Ok(refine_critical_point(system, q, &start)?.z_c))
}

/// The limit law of the root of `eq` with `F(0) = f0`.
pub fn growth_and_moments_polynomial(eq: &PolynomialEquation, f0: f64) -> Result<LimitLaw, AsymptoticsError> {
    let critical = find_polynomial_critical_point(eq, f0, 1.0)?;
    let start = critical.clone();
    moments(critical, |q| Ok(refine_polynomial_critical_point(eq, q, &start)?.z_c))
}
