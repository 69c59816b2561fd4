use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::SeriesError;

/// Laurent polynomial `Σ c_e q^e` with arbitrary-precision integer coefficients.
///
/// Stored densely from `min_exp`; the first and last stored coefficients are nonzero,
/// and the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    min_exp: i64,
    coeffs: Vec<BigInt>,
}

pub(crate) static ZERO: QPolynomial = QPolynomial {
    min_exp: 0,
    coeffs: Vec::new(),
};

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial::default()
    }

    pub fn one() -> Self {
        QPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        QPolynomial::monomial(c, 0)
    }

    /// `c · q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        QPolynomial::from_coeffs(e, vec![c.into()])
    }

    /// Builds `Σ_i coeffs[i] q^(min_exp + i)`, trimming zero ends.
    pub fn from_coeffs(min_exp: i64, mut coeffs: Vec<BigInt>) -> Self {
        let last = coeffs.iter().rposition(|c| !c.is_zero());
        let Some(last) = last else {
            return QPolynomial::zero();
        };
        coeffs.truncate(last + 1);
        let first = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if first > 0 {
            coeffs.drain(..first);
        }
        QPolynomial {
            min_exp: min_exp + first as i64,
            coeffs,
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_pairs<C: Into<BigInt> + Clone>(pairs: &[(i64, C)]) -> Self {
        if pairs.is_empty() {
            return QPolynomial::zero();
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap_or(0);
        let hi = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in pairs {
            coeffs[(e - lo) as usize] += c.clone().into();
        }
        QPolynomial::from_coeffs(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Highest exponent with a nonzero coefficient (`min_exp - 1` for the zero polynomial).
    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    /// Dense coefficients starting at [`min_exp`](Self::min_exp).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        let i = e - self.min_exp;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Value at `q = 1`, i.e. the sum of the coefficients.
    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Floating-point evaluation at `q`.
    pub fn eval_f64(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c.to_f64().unwrap_or(f64::NAN);
        }
        acc * q.powi(self.min_exp as i32)
    }

    /// `q^k · self`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        QPolynomial {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return QPolynomial::zero();
        }
        QPolynomial {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, failing unless all divisions are exact.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (quo, rem) = num_integer::Integer::div_rem(x, c);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(QPolynomial {
            min_exp: self.min_exp,
            coeffs: out,
        })
    }

    /// The substitution `q -> 1/q`.
    pub fn invert_q(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        QPolynomial {
            min_exp: -self.max_exp(),
            coeffs,
        }
    }

    /// Whether the polynomial is invariant under `q -> 1/q`.
    pub fn is_symmetric(&self) -> bool {
        self.is_zero() || (self.min_exp == -self.max_exp() && self.coeffs.iter().eq(self.coeffs.iter().rev()))
    }

    /// Whether every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Largest bit length among the coefficients.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Rewrites a symmetric polynomial in the basis `Q^l`, `Q = q + 1/q`; returns `d_0, d_1, ...`.
    pub fn loop_basis(&self) -> Result<Vec<BigInt>, SeriesError> {
        if !self.is_symmetric() {
            return Err(SeriesError::Asymmetric);
        }
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let top = self.max_exp() as usize;
        let mut rest: Vec<BigInt> = self.coeffs.clone();
        let mut d = vec![BigInt::zero(); top + 1];
        // rest[j] holds the coefficient of q^(j - top).
        let mut row: Vec<BigInt> = vec![BigInt::one()];
        let mut rows = Vec::with_capacity(top + 1);
        for _ in 0..=top {
            rows.push(row.clone());
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        for l in (0..=top).rev() {
            let c = rest[top + l].clone();
            if c.is_zero() {
                continue;
            }
            for (i, b) in rows[l].iter().enumerate() {
                let e = l as i64 - 2 * i as i64;
                let idx = (e + top as i64) as usize;
                rest[idx] -= &c * b;
            }
            d[l] = c;
        }
        Ok(d)
    }

    /// Expands `Σ d_l Q^l` with `Q = q + 1/q` into a Laurent polynomial.
    pub fn from_loop_basis(d: &[BigInt]) -> Self {
        let Some(top) = d.iter().rposition(|c| !c.is_zero()) else {
            return QPolynomial::zero();
        };
        // Horner in Q; acc holds exponents -top..=top.
        let width = 2 * top + 1;
        let mut acc = vec![BigInt::zero(); width];
        for l in (0..=top).rev() {
            let mut next = vec![BigInt::zero(); width];
            for (i, c) in acc.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i + 1 < width {
                    next[i + 1] += c;
                }
                if i > 0 {
                    next[i - 1] += c;
                }
            }
            next[top] += &d[l];
            acc = next;
        }
        QPolynomial::from_coeffs(-(top as i64), acc)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        combine(self, rhs, false)
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;

    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        combine(self, rhs, true)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;

    fn neg(self) -> QPolynomial {
        QPolynomial {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        sum_of_products(&[(self, rhs)])
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn combine(a: &QPolynomial, b: &QPolynomial, subtract: bool) -> QPolynomial {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if subtract { -b } else { b.clone() };
    }
    let lo = a.min_exp.min(b.min_exp);
    let hi = a.max_exp().max(b.max_exp());
    let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.min_exp - lo) as usize + i] += c;
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.min_exp - lo) as usize + i];
        if subtract {
            *slot -= c;
        } else {
            *slot += c;
        }
    }
    QPolynomial::from_coeffs(lo, coeffs)
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, x: &QPolynomial) {
        add_in_place(self, x);
    }
}

fn add_in_place(acc: &mut QPolynomial, x: &QPolynomial) {
    if x.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = x.clone();
        return;
    }
    if x.min_exp >= acc.min_exp && x.max_exp() <= acc.max_exp() {
        let off = (x.min_exp - acc.min_exp) as usize;
        for (i, c) in x.coeffs.iter().enumerate() {
            acc.coeffs[off + i] += c;
        }
        let normalized = QPolynomial::from_coeffs(acc.min_exp, std::mem::take(&mut acc.coeffs));
        *acc = normalized;
    } else {
        *acc = &*acc + x;
    }
}

const SCHOOLBOOK_LIMIT: usize = 12;
const PARALLEL_PAIRS: usize = 16;

/// `Σ a_i · b_i` over the given pairs, computed exactly.
///
/// Large inputs go through Kronecker substitution: each polynomial is packed into one
/// big integer with slots wide enough that no carries cross slot boundaries, so a sum
/// of products becomes a sum of big-integer products.
pub fn sum_of_products(pairs: &[(&QPolynomial, &QPolynomial)]) -> QPolynomial {
    let pairs: Vec<(&QPolynomial, &QPolynomial)> = pairs
        .iter()
        .copied()
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .collect();
    if pairs.is_empty() {
        return QPolynomial::zero();
    }
    let longest = pairs.iter().map(|(a, b)| a.len().min(b.len())).max().unwrap_or(0);
    if longest <= SCHOOLBOOK_LIMIT {
        schoolbook(&pairs)
    } else {
        kronecker(&pairs)
    }
}

fn schoolbook(pairs: &[(&QPolynomial, &QPolynomial)]) -> QPolynomial {
    let lo = pairs.iter().map(|(a, b)| a.min_exp + b.min_exp).min().unwrap_or(0);
    let hi = pairs.iter().map(|(a, b)| a.max_exp() + b.max_exp()).max().unwrap_or(0);
    let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (a, b) in pairs {
        let off = (a.min_exp + b.min_exp - lo) as usize;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[off + i + j] += x * y;
                }
            }
        }
    }
    QPolynomial::from_coeffs(lo, acc)
}

fn ceil_log2(x: usize) -> u64 {
    (usize::BITS - x.saturating_sub(1).leading_zeros()) as u64
}

struct Packed {
    pos: Option<BigUint>,
    neg: Option<BigUint>,
}

fn pack(p: &QPolynomial, slot_words: usize) -> Packed {
    let mut pos: Vec<u32> = Vec::new();
    let mut neg: Vec<u32> = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let target = if c.sign() == Sign::Minus { &mut neg } else { &mut pos };
        let digits = c.magnitude().to_u32_digits();
        let start = i * slot_words;
        if target.len() < start + digits.len() {
            target.resize(start + slot_words, 0);
        }
        target[start..start + digits.len()].copy_from_slice(&digits);
    }
    let wrap = |v: Vec<u32>| if v.is_empty() { None } else { Some(BigUint::new(v)) };
    Packed {
        pos: wrap(pos),
        neg: wrap(neg),
    }
}

fn kronecker(pairs: &[(&QPolynomial, &QPolynomial)]) -> QPolynomial {
    let bits_a = pairs.iter().map(|(a, _)| a.max_bits()).max().unwrap_or(0);
    let bits_b = pairs.iter().map(|(_, b)| b.max_bits()).max().unwrap_or(0);
    let overlap = pairs.iter().map(|(a, b)| a.len().min(b.len())).max().unwrap_or(1);
    let slot_bits = bits_a + bits_b + ceil_log2(overlap * pairs.len() + 1) + 1;
    let slot_words = slot_bits.div_ceil(32) as usize;
    let shift_bits = 32 * slot_words;
    let lo = pairs.iter().map(|(a, b)| a.min_exp + b.min_exp).min().unwrap_or(0);
    let hi = pairs.iter().map(|(a, b)| a.max_exp() + b.max_exp()).max().unwrap_or(0);

    let product = |(a, b): &(&QPolynomial, &QPolynomial)| -> (BigUint, BigUint) {
        let pa = pack(a, slot_words);
        let pb = pack(b, slot_words);
        let mul = |x: &Option<BigUint>, y: &Option<BigUint>| match (x, y) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        };
        let shift = ((a.min_exp + b.min_exp - lo) as usize) * shift_bits;
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for t in [mul(&pa.pos, &pb.pos), mul(&pa.neg, &pb.neg)].into_iter().flatten() {
            plus += t;
        }
        for t in [mul(&pa.pos, &pb.neg), mul(&pa.neg, &pb.pos)].into_iter().flatten() {
            minus += t;
        }
        (plus << shift, minus << shift)
    };
    let add = |(p1, m1): (BigUint, BigUint), (p2, m2): (BigUint, BigUint)| (p1 + p2, m1 + m2);
    let (plus, minus) = if pairs.len() >= PARALLEL_PAIRS {
        pairs
            .par_iter()
            .map(product)
            .reduce(|| (BigUint::zero(), BigUint::zero()), add)
    } else {
        pairs.iter().map(product).fold((BigUint::zero(), BigUint::zero()), add)
    };

    let width = (hi - lo + 1) as usize;
    let plus = unpack(&plus, slot_words, width);
    let minus = unpack(&minus, slot_words, width);
    let coeffs = plus
        .into_iter()
        .zip(minus)
        .map(|(p, m)| BigInt::from(p) - BigInt::from(m))
        .collect();
    QPolynomial::from_coeffs(lo, coeffs)
}

fn unpack(x: &BigUint, slot_words: usize, width: usize) -> Vec<BigUint> {
    let digits = x.to_u32_digits();
    (0..width)
        .map(|i| {
            let start = i * slot_words;
            if start >= digits.len() {
                BigUint::zero()
            } else {
                let end = (start + slot_words).min(digits.len());
                BigUint::from_slice(&digits[start..end])
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i64, i64)]) -> QPolynomial {
        QPolynomial::from_pairs(pairs)
    }

    #[test]
    fn normalizes_zero_ends() {
        let x = QPolynomial::from_coeffs(-2, vec![0.into(), 3.into(), 0.into(), 1.into(), 0.into()]);
        assert_eq!(x.min_exp(), -1);
        assert_eq!(x.max_exp(), 1);
        assert_eq!(x.coeffs().len(), 3);
        assert!(QPolynomial::from_coeffs(4, vec![0.into()]).is_zero());
    }

    #[test]
    fn multiplication_small() {
        let a = p(&[(1, 1), (0, 1)]);
        let b = p(&[(-1, 1), (0, 1)]);
        assert_eq!(&a * &b, p(&[(-1, 1), (0, 2), (1, 1)]));
    }

    #[test]
    fn kronecker_matches_schoolbook_with_signs() {
        let a: Vec<(i64, i64)> = (0..40).map(|i| (i - 20, (i * 7919 % 101) - 50)).collect();
        let b: Vec<(i64, i64)> = (0..30).map(|i| (i - 3, (i * 104729 % 97) - 40)).collect();
        let (a, b) = (p(&a), p(&b));
        let big = &a.scale(&BigInt::from(10).pow(40)) * &b;
        assert_eq!(kronecker(&[(&a, &b)]), schoolbook(&[(&a, &b)]));
        let a40 = a.scale(&BigInt::from(10).pow(40));
        assert_eq!(schoolbook(&[(&a40, &b)]), big);
        let pairs = [(&a, &b), (&b, &a40), (&a, &a)];
        assert_eq!(kronecker(&pairs), schoolbook(&pairs));
    }

    #[test]
    fn loop_basis_examples() {
        // 2q + 4 + 2/q = 2Q + 4.
        assert_eq!(
            p(&[(-1, 2), (0, 4), (1, 2)]).loop_basis().unwrap(),
            vec![BigInt::from(4), BigInt::from(2)]
        );
        // q + 4 + 1/q = Q + 4.
        assert_eq!(
            p(&[(-1, 1), (0, 4), (1, 1)]).loop_basis().unwrap(),
            vec![BigInt::from(4), BigInt::from(1)]
        );
        assert_eq!(QPolynomial::constant(5).loop_basis().unwrap(), vec![BigInt::from(5)]);
        assert!(p(&[(1, 1)]).loop_basis().is_err());
    }

    #[test]
    fn from_loop_basis_inverts() {
        let x = p(&[(-3, 2), (-1, 5), (0, 7), (1, 5), (3, 2)]);
        let d = x.loop_basis().unwrap();
        assert_eq!(QPolynomial::from_loop_basis(&d), x);
    }

    #[test]
    fn evaluation_and_inversion() {
        let x = p(&[(-1, 2), (2, 3)]);
        assert!((x.eval_f64(2.0) - (1.0 + 12.0)).abs() < 1e-12);
        assert_eq!(x.invert_q(), p(&[(1, 2), (-2, 3)]));
        assert_eq!(x.sum(), BigInt::from(5));
    }
}
