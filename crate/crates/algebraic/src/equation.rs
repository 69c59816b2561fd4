use std::fmt;

use cogrowth_series::{sum_of_products, QPolynomial, QZSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::AlgebraicError;

/// `P(F, z, Q) = Σ_j Σ_i c_{j,i}(Q) z^i F^j = 0` with `Q = q + 1/q`.
///
/// `coeffs[j][i]` is a polynomial in `Q` stored as a [`QPolynomial`] whose exponents
/// are powers of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialEquation {
    pub name: String,
    coeffs: Vec<Vec<QPolynomial>>,
}

/// Builds a polynomial in `Q` from `(power, coefficient)` pairs.
fn qp(pairs: &[(i64, i64)]) -> QPolynomial {
    QPolynomial::from_pairs(pairs)
}

/// Builds a polynomial in `z` with integer coefficients, lowest power first.
fn zp(cs: &[i64]) -> Vec<QPolynomial> {
    cs.iter().map(|&c| QPolynomial::constant(c)).collect()
}

fn zpoly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zpoly_product(factors: &[&[i64]]) -> Vec<i64> {
    factors.iter().fold(vec![1], |acc, f| zpoly_mul(&acc, f))
}

impl PolynomialEquation {
    /// Creates an equation from `coeffs[j][i]`, the `Q`-polynomial multiplying `z^i F^j`.
    pub fn new(name: &str, coeffs: Vec<Vec<QPolynomial>>) -> Result<Self, AlgebraicError> {
        let eq = PolynomialEquation {
            name: name.to_string(),
            coeffs,
        };
        if eq.degree() == 0 {
            return Err(AlgebraicError::Malformed("no positive power of F".into()));
        }
        for row in &eq.coeffs {
            for c in row {
                if !c.is_zero() && c.min_exp() < 0 {
                    return Err(AlgebraicError::Malformed("negative power of Q".into()));
                }
            }
        }
        Ok(eq)
    }

    /// The equation for walks on `G(2,3)`:
    /// `(1 - z²) + j1 F + j2 F² + j3 F³ = 0`, where `j3` carries the term
    /// `(Q - 2)(Q² + Q - 1) z⁶`.
    pub fn trefoil() -> Self {
        let mut eq = Self::trefoil_without_sextic_term();
        eq.coeffs[3].push(qp(&[(3, 1), (2, -1), (1, -3), (0, 2)]));
        eq
    }

    /// [`trefoil`](Self::trefoil) without the `z⁶` term of `j3`. It agrees with the
    /// `G(2,3)` series only up to `z⁵`, and coincides with the full equation at `Q = 2`.
    pub fn trefoil_without_sextic_term() -> Self {
        let j0 = zp(&[1, 0, -1]);
        let j1 = vec![
            qp(&[(0, 1)]),
            QPolynomial::zero(),
            qp(&[(1, -1), (0, -3)]),
            qp(&[(1, 1)]),
            qp(&[(1, -1)]),
        ];
        let j2 = vec![
            qp(&[(0, -1)]),
            QPolynomial::zero(),
            qp(&[(1, 2), (0, 8)]),
            qp(&[(1, 1)]),
            qp(&[(2, -1), (1, -4), (0, -7)]),
            qp(&[(2, 1), (1, 1)]),
        ];
        let j3 = vec![
            qp(&[(0, -1)]),
            QPolynomial::zero(),
            qp(&[(1, 3), (0, 12)]),
            qp(&[(1, 2)]),
            qp(&[(2, -3), (1, -12), (0, -21)]),
            qp(&[(2, 6), (1, 6)]),
        ];
        PolynomialEquation {
            name: "trefoil".into(),
            coeffs: vec![j0, j1, j2, j3],
        }
    }

    /// The equation for the standard presentation of B3:
    /// `(8Qz³ + 12z² - 1)F³ + (4z² - 1)F² + F + 1 = 0`.
    pub fn braid_cubic() -> Self {
        let f3 = vec![qp(&[(0, -1)]), QPolynomial::zero(), qp(&[(0, 12)]), qp(&[(1, 8)])];
        PolynomialEquation {
            name: "braid-cubic".into(),
            coeffs: vec![zp(&[1]), zp(&[1]), zp(&[-1, 0, 4]), f3],
        }
    }

    /// The equation for `F00(z, 1)` of B3 with generators `a`, `x = ab`.
    pub fn axa_quintic() -> Self {
        let f5 = zpoly_product(&[&[1, 2], &[-1, 1], &[1, 3], &[-1, 4], &[-1, 4], &[1, 4]]);
        let f4 = zpoly_product(&[&[-1, 4], &[1, 6, -5, -50, -28, 16]]);
        let f3 = [1, -2, -18, 20, 52];
        let f2 = [1, 2, -18, -12, 12];
        let f1 = zpoly_product(&[&[0, 1], &[-2, 1], &[-1, 2, 4]]);
        let f0 = zpoly_product(&[&[0, 0, -1], &[3, 2]]);
        PolynomialEquation {
            name: "axa-quintic".into(),
            coeffs: [&f0[..], &f1, &f2, &f3, &f4, &f5].iter().map(|c| zp(c)).collect(),
        }
    }

    /// Highest power of `F`.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|row| row.iter().any(|c| !c.is_zero()))
            .unwrap_or(0)
    }

    /// Highest power of `z`.
    pub fn z_degree(&self) -> usize {
        self.coeffs.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// `c_{j,i}(Q)`, zero when absent.
    pub fn coeff(&self, j: usize, i: usize) -> QPolynomial {
        self.coeffs.get(j).and_then(|r| r.get(i)).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Vec<QPolynomial>] {
        &self.coeffs
    }

    /// The equation with `Q` replaced by the integer `value` (e.g. `2` for `q = 1`).
    pub fn specialize(&self, value: i64) -> Self {
        let v = BigInt::from(value);
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let mut acc = BigInt::zero();
                        for (e, x) in c.terms() {
                            acc += x * v.pow(e as u32);
                        }
                        QPolynomial::constant(acc)
                    })
                    .collect()
            })
            .collect();
        PolynomialEquation {
            name: format!("{}@Q={value}", self.name),
            coeffs,
        }
    }

    /// `P(f0, 0)` and `∂P/∂F(f0, 0)` as polynomials in `Q`.
    fn at_origin(&self, f0: &BigInt) -> (QPolynomial, QPolynomial) {
        let mut value = QPolynomial::zero();
        let mut slope = QPolynomial::zero();
        for j in 0..=self.degree() {
            let c = self.coeff(j, 0);
            value += &c.scale(&f0.pow(j as u32));
            if j > 0 {
                slope += &c.scale(&(BigInt::from(j) * f0.pow(j as u32 - 1)));
            }
        }
        (value, slope)
    }

    /// Checks that `f0` is a simple root at `z = 0` and returns `∂P/∂F(f0, 0)`, which must be
    /// a nonzero integer.
    pub(crate) fn simple_root_slope(&self, f0: &BigInt) -> Result<BigInt, AlgebraicError> {
        let (value, slope) = self.at_origin(f0);
        if !value.is_zero() {
            return Err(AlgebraicError::NotARoot(f0.to_string()));
        }
        if slope.is_zero() {
            return Err(AlgebraicError::MultipleRoot);
        }
        if slope.len() != 1 || slope.min_exp() != 0 {
            return Err(AlgebraicError::NonConstantSlope(slope.to_string()));
        }
        Ok(slope.coeffs()[0].clone())
    }
}

impl fmt::Display for PolynomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let body = c.to_string().replace('q', "Q");
                    parts.push(format!("({body})*z^{i}*F^{j}"));
                }
            }
        }
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Solves `P(F, z, Q) = 0` for the series with `F(0) = f0` and returns it with `Q`
/// expanded to `q + 1/q`.
pub fn series_solve_polynomial(eq: &PolynomialEquation, f0: i64, order: usize) -> Result<QZSeries, AlgebraicError> {
    let in_q = solve_in_loop_basis(eq, f0, order)?;
    Ok(QZSeries::from_coeffs(
        in_q.coeffs()
            .iter()
            .map(|c| {
                let d: Vec<BigInt> = (0..=c.max_exp().max(0)).map(|l| c.coeff(l)).collect();
                QPolynomial::from_loop_basis(&d)
            })
            .collect(),
    ))
}

/// Order-by-order solution with coefficients kept as polynomials in `Q`.
///
/// With `E_j = F^j`, the coefficient of `z^n` in `P` is linear in the unknown `F_n`
/// with slope `∂P/∂F(f0, 0)`; every other contribution is already known.
pub fn solve_in_loop_basis(eq: &PolynomialEquation, f0: i64, order: usize) -> Result<QZSeries, AlgebraicError> {
    let f0 = BigInt::from(f0);
    let slope = eq.simple_root_slope(&f0)?;
    let deg = eq.degree();
    // powers[j][n] = [z^n] F^j for j >= 1
    let mut powers: Vec<Vec<QPolynomial>> = vec![Vec::with_capacity(order + 1); deg + 1];
    for (j, p) in powers.iter_mut().enumerate().skip(1) {
        p.push(QPolynomial::constant(f0.pow(j as u32)));
    }
    for n in 1..=order {
        // partial[j] = [z^n] F^j with F_n = 0.
        let mut partial = vec![QPolynomial::zero(); deg + 1];
        for j in 2..=deg {
            let pairs: Vec<(&QPolynomial, &QPolynomial)> =
                (1..n).map(|t| (&powers[j - 1][t], &powers[1][n - t])).collect();
            let mut v = sum_of_products(&pairs);
            v += &partial[j - 1].scale(&f0);
            partial[j] = v;
        }
        let mut known = eq.coeff(0, n);
        for (j, part) in partial.iter().enumerate().skip(1) {
            let mut pairs: Vec<(QPolynomial, &QPolynomial)> = Vec::new();
            for i in 1..=n.min(eq.z_degree()) {
                let c = eq.coeff(j, i);
                if !c.is_zero() {
                    pairs.push((c, &powers[j][n - i]));
                }
            }
            let refs: Vec<(&QPolynomial, &QPolynomial)> = pairs.iter().map(|(c, p)| (c, *p)).collect();
            known += &sum_of_products(&refs);
            known += &(&eq.coeff(j, 0) * part);
        }
        let fn_coeff = (-&known).div_exact(&slope).ok_or(AlgebraicError::NotIntegral(n))?;
        for j in 1..=deg {
            let lin = BigInt::from(j) * f0.pow(j as u32 - 1);
            let v = &partial[j] + &fn_coeff.scale(&lin);
            powers[j].push(v);
        }
    }
    Ok(QZSeries::from_coeffs(powers.swap_remove(1)))
}

/// Result of substituting a series into an equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub order: usize,
    /// Lowest power of `z` with a nonzero residual, if any up to `order`.
    pub first_failure: Option<usize>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Substitutes `series` (coefficients in `q`) into `eq` and checks `P ≡ 0 mod z^(order+1)`.
pub fn residual_check(
    eq: &PolynomialEquation,
    series: &QZSeries,
    order: usize,
) -> Result<ResidualReport, AlgebraicError> {
    if series.order() < order {
        return Err(AlgebraicError::SeriesTooShort {
            have: series.order(),
            need: order,
        });
    }
    let f = series.truncate(order);
    let mut power = QZSeries::one(order);
    let mut total = QZSeries::zero(order);
    for j in 0..=eq.degree() {
        if j > 0 {
            power = power.mul(&f)?;
        }
        let mut a = QZSeries::zero(order);
        for i in 0..=order.min(eq.z_degree()) {
            let c = eq.coeff(j, i);
            if !c.is_zero() {
                let d: Vec<BigInt> = (0..=c.max_exp()).map(|l| c.coeff(l)).collect();
                a.set_coeff(i, QPolynomial::from_loop_basis(&d));
            }
        }
        total = total.add(&a.mul(&power)?)?;
    }
    let first_failure = (0..=order).find(|&n| !total.coeff(n).is_zero());
    Ok(ResidualReport { order, first_failure })
}

/// `Σ_l d_l binom(l, l/2)` over even `l`: the constant term in `q` of `Σ_l d_l (q + 1/q)^l`.
pub fn loop_basis_constant_term(d: &QPolynomial) -> BigInt {
    let mut acc = BigInt::zero();
    let mut central = BigInt::one();
    let top = d.max_exp().max(0) as u64;
    for l in (0..=top).step_by(2) {
        if l > 0 {
            // binom(l, l/2) from binom(l-2, l/2-1)
            central = central * BigInt::from(l) * BigInt::from(l - 1) / BigInt::from(l / 2 * (l / 2));
        }
        acc += d.coeff(l as i64) * &central;
    }
    acc
}
