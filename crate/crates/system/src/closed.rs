use cogrowth_group::GroupSpec;
use cogrowth_series::{binomial, ParityClass, QZSeries};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::{StarSeries, SystemError};

/// Exact coefficients for `G(2,...,2)` with `k` factors, indexed by `n` for `z^(2n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTreeSeries {
    pub k: u32,
    /// Closed walks on the `k`-regular tree: `k/n Σ_{m<n} (k-1)^m (n-m) binom(2n, m)`.
    pub tree: Vec<BigInt>,
    /// Cogrowth coefficients `binom(2n, n) · tree[n]`.
    pub cogrowth: Vec<BigInt>,
}

/// Evaluates the closed forms for `G(2,...,2)` up to `z^(2 n_max)`.
pub fn ktree_closed_form(k: u32, n_max: usize) -> Result<KTreeSeries, SystemError> {
    if k < 2 {
        return Err(SystemError::TooFewFactors(k));
    }
    let base = BigInt::from(k - 1);
    let mut tree = vec![BigInt::from(1)];
    for n in 1..=n_max as u64 {
        let mut s = BigInt::zero();
        let mut pow = BigInt::from(1);
        for m in 0..n {
            s += &pow * BigInt::from(n - m) * binomial(2 * n, m);
            pow *= &base;
        }
        tree.push(s * BigInt::from(k) / BigInt::from(n));
    }
    let cogrowth = tree
        .iter()
        .enumerate()
        .map(|(n, t)| t * binomial(2 * n as u64, n as u64))
        .collect();
    Ok(KTreeSeries { k, tree, cogrowth })
}

/// Parity pattern of a star-polygon group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeClass {
    AllEven,
    AllOdd,
    Mixed,
}

/// First coefficient found to be nonpositive inside its cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeViolation {
    pub series: String,
    pub n: usize,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeReport {
    pub class: ConeClass,
    /// Number of coefficients checked.
    pub checked: usize,
    pub violation: Option<ConeViolation>,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks strict positivity of `F` and each `L0^(i)` inside the cone of `(length, winding)`
/// pairs reachable by out-and-back steps and single polygon traversals.
///
/// For all-even groups `F` is checked after the even parity transform on
/// `|m| <= ⌊2n/p⌋`; for all-odd groups after the odd transform on `|2j - n| <= ⌊n/p⌋`,
/// with `p` the shortest period. Mixed groups use the cone generated by the
/// shortest even and odd polygons.
pub fn cone_positivity_check(series: &StarSeries, spec: &GroupSpec) -> Result<ConeReport, SystemError> {
    let periods = spec.periods().ok_or(SystemError::NotStarPolygon)?;
    let min_even = periods.iter().copied().filter(|p| p % 2 == 0).min();
    let min_odd = periods.iter().copied().filter(|p| p % 2 == 1).min();
    let class = match (min_even, min_odd) {
        (Some(_), None) => ConeClass::AllEven,
        (None, Some(_)) => ConeClass::AllOdd,
        _ => ConeClass::Mixed,
    };
    let f = &series.f;
    let mut checked = 0;
    let report = |violation: Option<ConeViolation>, checked: usize| ConeReport {
        class,
        checked,
        violation,
    };

    let first = match class {
        ConeClass::AllEven => {
            let p = min_even.unwrap_or(2) as usize;
            match f.parity_transform(ParityClass::Even) {
                Err(_) => first_parity_break(f, "F", ParityClass::Even),
                Ok(d) => scan(&d, &mut checked, |n| {
                    let w = (2 * n / p) as i64;
                    (-w..=w).collect()
                })
                .map(|(n, m)| ConeViolation {
                    series: "F".into(),
                    n: 2 * n,
                    m,
                }),
            }
        }
        ConeClass::AllOdd => {
            let p = min_odd.unwrap_or(3) as usize;
            match f.parity_transform(ParityClass::Odd) {
                Err(_) => first_parity_break(f, "F", ParityClass::Odd),
                Ok(d) => scan(&d, &mut checked, |n| {
                    let w = (n / p) as i64;
                    let n = n as i64;
                    // j with |2j - n| <= w
                    ((n - w + 1).div_euclid(2)..=(n + w).div_euclid(2)).collect()
                })
                .map(|(n, j)| ConeViolation {
                    series: "F".into(),
                    n,
                    m: 2 * j - n as i64,
                }),
            }
        }
        ConeClass::Mixed => {
            let moves: Vec<usize> = [min_even, min_odd].into_iter().flatten().map(|p| p as usize).collect();
            let cone = reachable(f.order(), &moves);
            scan(f, &mut checked, |n| cone[n].clone()).map(|(n, m)| ConeViolation {
                series: "F".into(),
                n,
                m,
            })
        }
    };
    if first.is_some() {
        return Ok(report(first, checked));
    }

    for (i, l0) in series.one_sided.iter().enumerate() {
        let cone = reachable(l0.order(), &[periods[i] as usize]);
        if let Some((n, m)) = scan(l0, &mut checked, |n| cone[n].clone()) {
            return Ok(report(
                Some(ConeViolation {
                    series: format!("L0_{}", i + 1),
                    n,
                    m,
                }),
                checked,
            ));
        }
    }
    Ok(report(None, checked))
}

fn first_parity_break(f: &QZSeries, name: &str, class: ParityClass) -> Option<ConeViolation> {
    for (n, c) in f.coeffs().iter().enumerate() {
        for (m, _) in c.terms() {
            let bad = match class {
                ParityClass::Even => n % 2 == 1,
                ParityClass::Odd => (m - n as i64).rem_euclid(2) != 0,
            };
            if bad {
                return Some(ConeViolation {
                    series: name.into(),
                    n,
                    m,
                });
            }
        }
    }
    None
}

fn scan(s: &QZSeries, checked: &mut usize, cone: impl Fn(usize) -> Vec<i64>) -> Option<(usize, i64)> {
    for n in 0..=s.order() {
        for m in cone(n) {
            *checked += 1;
            let c = s.get(n, m);
            if !c.is_positive() {
                return Some((n, m));
            }
        }
    }
    None
}

/// Windings reachable at each length using `(2, 0)` steps and `(p, ±1)` traversals.
fn reachable(order: usize, periods: &[usize]) -> Vec<Vec<i64>> {
    let width = order as i64;
    let idx = |m: i64| (m + width) as usize;
    let mut reach = vec![vec![false; 2 * order + 1]; order + 1];
    reach[0][idx(0)] = true;
    for n in 1..=order {
        for m in -width..=width {
            let from = |len: usize, dm: i64| {
                n >= len && {
                    let prev = m - dm;
                    prev.abs() <= width && reach[n - len][idx(prev)]
                }
            };
            let hit = from(2, 0) || periods.iter().any(|&p| from(p, 1) || from(p, -1));
            reach[n][idx(m)] = hit;
        }
    }
    reach
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as i64 - width)
                .collect()
        })
        .collect()
}
