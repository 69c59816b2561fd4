use cogrowth_series::{QPolynomial, QZSeries};
use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::AsymptoticsError;

/// Fewest nonzero terms accepted by [`exponent_fit`].
pub const MIN_FIT_TERMS: usize = 100;

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.sign() == Sign::Plus);
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` in floating point for big integers of any size.
pub fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let sign = if (a.sign() == Sign::Minus) != (b.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    sign * (ln_big(&a.magnitude().clone().into()) - ln_big(&b.magnitude().clone().into())).exp()
}

/// `f_n ≈ amplitude · μ^n · n^α` fitted on the window `n ∈ [N/2, N]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub alpha: f64,
    pub amplitude: f64,
    /// Coefficient of the `1/n` correction.
    pub beta: f64,
}

/// Least-squares fit of `log f_n - n log μ = α log n + c + β/n` over the nonzero terms
/// `f_n` with `n` a multiple of `step` in `[N/2, N]`, `N` the last such index.
pub fn exponent_fit(seq: &[BigInt], mu: f64, step: usize) -> Result<ExponentFit, AsymptoticsError> {
    let points: Vec<(f64, f64)> = seq
        .iter()
        .enumerate()
        .step_by(step.max(1))
        .filter(|(n, f)| *n > 0 && f.sign() == Sign::Plus)
        .map(|(n, f)| (n as f64, ln_big(f)))
        .collect();
    if points.len() < MIN_FIT_TERMS {
        return Err(AsymptoticsError::TooFewTerms {
            have: points.len(),
            need: MIN_FIT_TERMS,
        });
    }
    let last = points[points.len() - 1].0;
    let window: Vec<&(f64, f64)> = points.iter().filter(|(n, _)| *n >= last / 2.0).collect();
    let a = DMatrix::from_fn(window.len(), 3, |i, j| {
        let n = window[i].0;
        match j {
            0 => n.ln(),
            1 => 1.0,
            _ => 1.0 / n,
        }
    });
    let b = DVector::from_iterator(window.len(), window.iter().map(|(n, lf)| lf - n * mu.ln()));
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| AsymptoticsError::Numerical(e.to_string()))?;
    Ok(ExponentFit {
        alpha: sol[0],
        amplitude: sol[1].exp(),
        beta: sol[2],
    })
}

/// Largest relative deviation of `f_{N,m}/f_{N,0}` from `exp(-m²/(2σ²N))` over
/// `|m| <= √N`, `m` a multiple of `step`.
pub fn gaussian_profile_check(row: &QPolynomial, n: usize, sigma2: f64, step: i64) -> Result<f64, AsymptoticsError> {
    let centre = row.coeff(0);
    if centre.sign() != Sign::Plus {
        return Err(AsymptoticsError::EmptyCentre(n));
    }
    let width = (n as f64).sqrt().floor() as i64;
    let mut worst: f64 = 0.0;
    let step = step.max(1);
    let mut m = -(width - width.rem_euclid(step));
    while m <= width {
        let ratio = ratio_f64(&row.coeff(m), &centre);
        let predicted = (-(m * m) as f64 / (2.0 * sigma2 * n as f64)).exp();
        worst = worst.max((ratio / predicted - 1.0).abs());
        m += step;
    }
    Ok(worst)
}

/// `v_n = Σ_{i=0..n} P_i P_{n-i} / P_n` with `P_n = f_n/(2k)^n`, and `v_n = 0` when `f_n = 0`.
pub fn expected_returns(f: &[BigInt], k: u32) -> Vec<f64> {
    let ln_step = (2.0 * k as f64).ln();
    let ln_p: Vec<Option<f64>> = f
        .iter()
        .enumerate()
        .map(|(n, x)| (x.sign() == Sign::Plus).then(|| ln_big(x) - n as f64 * ln_step))
        .collect();
    (0..f.len())
        .map(|n| {
            let Some(pn) = ln_p[n] else {
                return 0.0;
            };
            (0..=n).filter_map(|i| Some((ln_p[i]? + ln_p[n - i]? - pn).exp())).sum()
        })
        .collect()
}

/// Winding variances `V[W_n]` of the walks counted by a series, with bound checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    /// `V[W_n] = Σ_m m² f_{n,m} / Σ_m f_{n,m}`, zero when no walk has length `n`.
    pub variance: Vec<f64>,
    /// Whether `V[W_n] <= n` for every `n`.
    pub upper_bound_holds: bool,
    /// Least-squares slope of `V[W_n]` against `n` over `[N/2, N]`.
    pub slope: f64,
}

impl VarianceReport {
    /// `min` and `max` of `V[W_n]/n` over nonzero terms with `n >= from`.
    pub fn ratio_range(&self, from: usize) -> (f64, f64) {
        self.variance
            .iter()
            .enumerate()
            .skip(from.max(1))
            .filter(|(_, v)| **v > 0.0)
            .map(|(n, v)| v / n as f64)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}

pub fn variance_sequence(series: &QZSeries) -> Result<VarianceReport, AsymptoticsError> {
    let mut variance = Vec::with_capacity(series.order() + 1);
    for (n, c) in series.coeffs().iter().enumerate() {
        if !c.is_symmetric() {
            return Err(AsymptoticsError::Asymmetric(n));
        }
        let total = c.sum();
        if total.is_zero() {
            variance.push(0.0);
            continue;
        }
        let second: BigInt = c.terms().map(|(m, x)| x * BigInt::from(m * m)).sum();
        variance.push(ratio_f64(&second, &total));
    }
    let upper_bound_holds = variance.iter().enumerate().all(|(n, v)| *v <= n as f64 * (1.0 + 1e-12));
    let last = variance.len() - 1;
    let pts: Vec<(f64, f64)> = variance
        .iter()
        .enumerate()
        .skip(last / 2)
        .filter(|(_, v)| **v > 0.0)
        .map(|(n, v)| (n as f64, *v))
        .collect();
    let slope = if pts.len() >= 2 {
        let k = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / k, sy / k);
        let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
            (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
        });
        num / den
    } else {
        f64::NAN
    };
    Ok(VarianceReport {
        variance,
        upper_bound_holds,
        slope,
    })
}

/// `x^(1/n)` for a positive big integer.
pub fn growth_estimate(x: &BigInt, n: usize) -> f64 {
    if x.sign() != Sign::Plus || n == 0 {
        return 0.0;
    }
    (ln_big(x) / n as f64).exp()
}

/// `(f_{N,0}^(1/N), (Σ_m f_{N,m})^(1/N))`.
pub fn growth_rate_compare(series: &QZSeries, n: usize) -> (f64, f64) {
    let row = series.coeff(n);
    (growth_estimate(&row.coeff(0), n), growth_estimate(&row.sum(), n))
}
