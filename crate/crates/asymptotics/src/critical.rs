use cogrowth_algebraic::PolynomialEquation;
use cogrowth_system::EquationSystem;
use nalgebra::{DMatrix, DVector};

use crate::AsymptoticsError;

/// Step of the initial scan in `z`.
const SCAN_STEP: f64 = 0.01;
/// Step of the scan along a root of a single equation.
const ROOT_SCAN_STEP: f64 = 0.001;
/// Width of the bracket handed to Newton's method.
const BRACKET_WIDTH: f64 = 1e-4;
/// Iteration cap for the value fixed point at a single `z`.
const FIXED_POINT_ITERATIONS: usize = 20_000;
/// Magnitude treated as divergence of the fixed point.
const DIVERGENCE: f64 = 1e10;
/// Required size of every residual at the critical point.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// A solution of `Y = Φ(z, Y, q)`, `det(I - ∂Φ/∂Y) = 0` (or, for a single equation,
/// `P = ∂P/∂F = 0`) on the branch through the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub q: f64,
    pub z_c: f64,
    pub y_c: Vec<f64>,
    /// Residuals of the defining equations at `(z_c, y_c)`; the last one is the
    /// determinant (or `∂P/∂F`) condition.
    pub residuals: Vec<f64>,
}

impl CriticalPoint {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `1 / z_c`.
    pub fn growth(&self) -> f64 {
        1.0 / self.z_c
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton's method with a central-difference Jacobian and step halving.
///
/// Iterates until the residual stops decreasing, then requires it to be below
/// [`RESIDUAL_TOLERANCE`].
pub(crate) fn newton(f: impl Fn(&[f64]) -> Vec<f64>, x0: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>), AsymptoticsError> {
    let dim = x0.len();
    let mut x = x0;
    let mut r = f(&x);
    let mut stalled = 0;
    for _ in 0..100 {
        if !r.iter().all(|v| v.is_finite()) {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(r.len(), dim);
        for k in 0..dim {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for i in 0..r.len() {
                jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = -DVector::from_vec(r.clone());
        let Some(dx) = jac.lu().solve(&rhs) else {
            break;
        };
        let norm = max_abs(&r);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let xn: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + t * d).collect();
            let rn = f(&xn);
            if rn.iter().all(|v| v.is_finite()) && max_abs(&rn) < norm {
                accepted = Some((xn, rn));
                break;
            }
            t /= 2.0;
        }
        match accepted {
            Some((xn, rn)) => {
                x = xn;
                r = rn;
                stalled = 0;
            }
            None => {
                stalled += 1;
                if stalled > 1 {
                    break;
                }
            }
        }
        if max_abs(&r) < 1e-15 {
            break;
        }
    }
    if max_abs(&r) < RESIDUAL_TOLERANCE {
        Ok((x, r))
    } else {
        Err(AsymptoticsError::NewtonFailed {
            last: x,
            residual: max_abs(&r),
        })
    }
}

fn augmented_system(system: &EquationSystem, q: f64, x: &[f64]) -> Vec<f64> {
    let (z, y) = (x[0], &x[1..]);
    let (phi, jac) = system.eval_f64(z, q, y);
    let u = y.len();
    let mut out: Vec<f64> = y.iter().zip(&phi).map(|(a, b)| a - b).collect();
    let m = DMatrix::from_fn(u, u, |i, j| if i == j { 1.0 } else { 0.0 } - jac[i][j]);
    out.push(m.determinant());
    out
}

/// Iterates `Y ← Φ(z, Y, q)` from `start`; `None` when it diverges or does not settle.
fn fixed_point(system: &EquationSystem, z: f64, q: f64, start: &[f64]) -> Option<Vec<f64>> {
    let mut y = start.to_vec();
    for _ in 0..FIXED_POINT_ITERATIONS {
        let (next, _) = system.eval_f64(z, q, &y);
        if next.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE) {
            return None;
        }
        let delta = next
            .iter()
            .zip(&y)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs() / (1.0 + a.abs())));
        y = next;
        if delta < 1e-14 {
            return Some(y);
        }
    }
    None
}

/// Locates the dominant critical point of a strongly connected system at real `q`.
///
/// `z` is scanned in steps of `0.01` while the value iteration converges; the bracket
/// is narrowed by bisection and the augmented system `(Y - Φ, det(I - M))` is solved by
/// Newton's method from the last convergent point.
pub fn find_critical_point(system: &EquationSystem, q: f64) -> Result<CriticalPoint, AsymptoticsError> {
    if !system.is_strongly_connected() {
        return Err(AsymptoticsError::NotStronglyConnected);
    }
    let u = system.unknown_count();
    let mut y = vec![0.0; u];
    let (mut lo, mut hi) = (0.0, None);
    let mut step = 1;
    while (step as f64) * SCAN_STEP <= 1.0 {
        let z = step as f64 * SCAN_STEP;
        match fixed_point(system, z, q, &y) {
            Some(v) => {
                lo = z;
                y = v;
            }
            None => {
                hi = Some(z);
                break;
            }
        }
        step += 1;
    }
    let mut hi = hi.ok_or(AsymptoticsError::NoBracket)?;
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        match fixed_point(system, mid, q, &y) {
            Some(v) => {
                lo = mid;
                y = v;
            }
            None => hi = mid,
        }
    }
    let mut x0 = vec![lo];
    x0.extend(&y);
    let point = solve_augmented(system, q, x0)?;
    if !(point.z_c >= lo - BRACKET_WIDTH && point.z_c <= hi + BRACKET_WIDTH) {
        return Err(AsymptoticsError::NewtonFailed {
            last: point.y_c.clone(),
            residual: f64::NAN,
        });
    }
    Ok(point)
}

/// Newton's method on the augmented system from a nearby critical point (e.g. at a
/// neighbouring `q`).
pub fn refine_critical_point(
    system: &EquationSystem,
    q: f64,
    start: &CriticalPoint,
) -> Result<CriticalPoint, AsymptoticsError> {
    let mut x0 = vec![start.z_c];
    x0.extend(&start.y_c);
    solve_augmented(system, q, x0)
}

fn solve_augmented(system: &EquationSystem, q: f64, x0: Vec<f64>) -> Result<CriticalPoint, AsymptoticsError> {
    let (x, residuals) = newton(|x| augmented_system(system, q, x), x0)?;
    let point = CriticalPoint {
        q,
        z_c: x[0],
        y_c: x[1..].to_vec(),
        residuals,
    };
    if point.z_c <= 0.0 || point.y_c.iter().any(|&v| v <= 0.0) {
        return Err(AsymptoticsError::NotPositive);
    }
    Ok(point)
}

/// `P(F, z)` and `∂P/∂F` with `Q = q + 1/q` substituted.
struct RealPolynomial {
    /// `coeffs[j][i]` multiplies `z^i F^j`.
    coeffs: Vec<Vec<f64>>,
}

impl RealPolynomial {
    fn new(eq: &PolynomialEquation, q: f64) -> Self {
        let big_q = q + 1.0 / q;
        RealPolynomial {
            coeffs: eq
                .coeffs()
                .iter()
                .map(|row| row.iter().map(|c| c.eval_f64(big_q)).collect())
                .collect(),
        }
    }

    fn eval(&self, f: f64, z: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut slope = 0.0;
        let mut fj = 1.0;
        for (j, row) in self.coeffs.iter().enumerate() {
            let a = row.iter().rev().fold(0.0, |acc, c| acc * z + c);
            value += a * fj;
            if j + 1 < self.coeffs.len() {
                let next = self.coeffs[j + 1].iter().rev().fold(0.0, |acc, c| acc * z + c);
                slope += (j + 1) as f64 * next * fj;
            }
            fj *= f;
        }
        (value, slope)
    }

    fn second(&self, f: f64, z: f64) -> f64 {
        let mut fj = 1.0;
        let mut out = 0.0;
        for j in 2..self.coeffs.len() {
            let a = self.coeffs[j].iter().rev().fold(0.0, |acc, c| acc * z + c);
            out += (j * (j - 1)) as f64 * a * fj;
            fj *= f;
        }
        out
    }

    /// Root near `guess` by Newton's method, keeping the sign of `∂P/∂F`.
    fn track(&self, z: f64, guess: f64, sign: f64) -> Option<f64> {
        let mut f = guess;
        for _ in 0..100 {
            let (v, d) = self.eval(f, z);
            if d == 0.0 || d.signum() != sign {
                return None;
            }
            let step = v / d;
            f -= step;
            if !f.is_finite() {
                return None;
            }
            if step.abs() <= 1e-14 * (1.0 + f.abs()) {
                let (_, d) = self.eval(f, z);
                return (d.signum() == sign && (f - guess).abs() < 0.5 * (1.0 + guess.abs())).then_some(f);
            }
        }
        None
    }
}

/// Locates the branch point `P = ∂P/∂F = 0` of the root with `F(0) = f0` at real `q`.
pub fn find_polynomial_critical_point(
    eq: &PolynomialEquation,
    f0: f64,
    q: f64,
) -> Result<CriticalPoint, AsymptoticsError> {
    let poly = RealPolynomial::new(eq, q);
    let (v0, d0) = poly.eval(f0, 0.0);
    if v0.abs() > 1e-12 || d0 == 0.0 {
        return Err(AsymptoticsError::NoBracket);
    }
    let sign = d0.signum();
    let (mut lo, mut f) = (0.0, f0);
    let mut hi = None;
    let mut step = 1;
    while (step as f64) * ROOT_SCAN_STEP <= 1.0 {
        let z = step as f64 * ROOT_SCAN_STEP;
        match poly.track(z, f, sign) {
            Some(v) => {
                lo = z;
                f = v;
            }
            None => {
                hi = Some(z);
                break;
            }
        }
        step += 1;
    }
    let mut hi = hi.ok_or(AsymptoticsError::NoBracket)?;
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        match poly.track(mid, f, sign) {
            Some(v) => {
                lo = mid;
                f = v;
            }
            None => hi = mid,
        }
    }
    // Start beyond the fold's apex in F, where the quadratic model of P places it.
    let (_, d) = poly.eval(f, lo);
    let curvature = poly.second(f, lo);
    let f_start = if curvature != 0.0 { f - d / curvature } else { f };
    polynomial_newton(&poly, q, vec![lo, f_start]).or_else(|_| polynomial_newton(&poly, q, vec![lo, f]))
}

/// Newton's method on `(P, ∂P/∂F)` from a nearby critical point.
pub fn refine_polynomial_critical_point(
    eq: &PolynomialEquation,
    q: f64,
    start: &CriticalPoint,
) -> Result<CriticalPoint, AsymptoticsError> {
    let poly = RealPolynomial::new(eq, q);
    polynomial_newton(&poly, q, vec![start.z_c, start.y_c[0]])
}

fn polynomial_newton(poly: &RealPolynomial, q: f64, x0: Vec<f64>) -> Result<CriticalPoint, AsymptoticsError> {
    let (x, residuals) = newton(
        |x| {
            let (v, d) = poly.eval(x[1], x[0]);
            vec![v, d]
        },
        x0,
    )?;
    if x[0] <= 0.0 {
        return Err(AsymptoticsError::NotPositive);
    }
    Ok(CriticalPoint {
        q,
        z_c: x[0],
        y_c: vec![x[1]],
        residuals,
    })
}
