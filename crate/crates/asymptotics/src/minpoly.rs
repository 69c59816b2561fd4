/// Grid intervals per unit of the root bound when isolating sign changes.
const GRID_PER_UNIT: f64 = 2000.0;

/// Outcome of comparing a number with a polynomial it should be a root of.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalPolyReport {
    /// The polynomial evaluated at the value.
    pub residual: f64,
    /// Real roots found by bisection on sign changes, increasing.
    pub real_roots: Vec<f64>,
    pub largest_positive_root: Option<f64>,
    /// Whether the value agrees with the largest positive root to `1e-9` relative.
    pub is_largest_positive: bool,
}

/// Evaluates a polynomial given with its highest coefficient first.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

fn bisect(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = eval_poly(coeffs, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval_poly(coeffs, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots with a sign change, inside the Cauchy bound.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let Some(lead) = coeffs.iter().position(|c| *c != 0.0) else {
        return Vec::new();
    };
    let coeffs = &coeffs[lead..];
    let bound = 1.0 + coeffs[1..].iter().fold(0.0f64, |m, c| m.max((c / coeffs[0]).abs()));
    let steps = (2.0 * bound * GRID_PER_UNIT).ceil() as usize;
    let width = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut f0 = eval_poly(coeffs, x0);
    for i in 1..=steps {
        let x1 = -bound + i as f64 * width;
        let f1 = eval_poly(coeffs, x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(coeffs, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Residual of `value` in the polynomial (highest coefficient first) and whether it is
/// the largest positive real root.
pub fn minimal_poly_check(value: f64, coeffs: &[f64]) -> MinimalPolyReport {
    let roots = real_roots(coeffs);
    let largest = roots
        .iter()
        .copied()
        .filter(|r| *r > 0.0)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
    MinimalPolyReport {
        residual: eval_poly(coeffs, value),
        is_largest_positive: largest.is_some_and(|r| (r - value).abs() <= 1e-9 * r.abs().max(1.0)),
        largest_positive_root: largest,
        real_roots: roots,
    }
}
