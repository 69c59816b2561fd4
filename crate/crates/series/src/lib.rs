//! Exact bivariate series `Σ_n c_n(q) z^n` whose coefficients are Laurent polynomials
//! in `q` with big-integer coefficients.

pub mod modular;
mod qpoly;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

pub use qpoly::{sum_of_products, QPolynomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term {0} is not a unit")]
    NotInvertible(String),
    #[error("coefficient of z^{n} q^{m} violates the parity pattern")]
    ParityViolation { n: usize, m: i64 },
    #[error("polynomial is not symmetric under q -> 1/q")]
    Asymmetric,
}

/// Which parity pattern a series follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    /// Only even powers of `z`; the transform substitutes `z^2 -> z`.
    Even,
    /// `z^n q^m` appears only when `n ≡ m (mod 2)`; the transform maps `q^m` to `q^((m+n)/2)`.
    Odd,
}

/// Truncated series `Σ_{n <= order} c_n(q) z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QZSeries {
    coeffs: Vec<QPolynomial>,
}

impl QZSeries {
    pub fn zero(order: usize) -> Self {
        QZSeries {
            coeffs: vec![QPolynomial::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QZSeries::zero(order);
        s.coeffs[0] = QPolynomial::one();
        s
    }

    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<QPolynomial>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        QZSeries { coeffs }
    }

    /// Highest power of `z` retained.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^n`, zero beyond the order.
    pub fn coeff(&self, n: usize) -> &QPolynomial {
        self.coeffs.get(n).unwrap_or(&qpoly::ZERO)
    }

    pub fn coeffs(&self) -> &[QPolynomial] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: QPolynomial) {
        self.coeffs[n] = c;
    }

    /// `[z^n q^m]`.
    pub fn get(&self, n: usize, m: i64) -> BigInt {
        self.coeff(n).coeff(m)
    }

    /// Keeps coefficients up to `z^order`, padding with zeros if needed.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<QPolynomial> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, QPolynomial::zero());
        QZSeries { coeffs }
    }

    fn check_order(&self, other: &QZSeries) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn add(&self, other: &QZSeries) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(QZSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &QZSeries) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(QZSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        QZSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &QZSeries) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = (0..=self.order())
            .into_par_iter()
            .map(|n| {
                let pairs: Vec<(&QPolynomial, &QPolynomial)> =
                    (0..=n).map(|t| (&self.coeffs[t], &other.coeffs[n - t])).collect();
                sum_of_products(&pairs)
            })
            .collect();
        Ok(QZSeries { coeffs })
    }

    /// Multiplies every coefficient by the polynomial `p(q)`.
    pub fn scale(&self, p: &QPolynomial) -> Self {
        QZSeries {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// `z^k · self`, truncated to the same order.
    pub fn shift_z(&self, k: usize) -> Self {
        let mut coeffs = vec![QPolynomial::zero(); k.min(self.coeffs.len())];
        coeffs.extend(self.coeffs.iter().take(self.coeffs.len().saturating_sub(k)).cloned());
        QZSeries { coeffs }
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        let unit = a0.len() == 1 && a0.min_exp() == 0 && a0.coeffs()[0].abs().is_one();
        if !unit {
            return Err(SeriesError::NotInvertible(a0.to_string()));
        }
        let sign = a0.coeffs()[0].clone();
        let mut out = vec![QPolynomial::constant(sign.clone())];
        for n in 1..=self.order() {
            let pairs: Vec<(&QPolynomial, &QPolynomial)> = (1..=n).map(|t| (&self.coeffs[t], &out[n - t])).collect();
            let s = sum_of_products(&pairs);
            out.push(s.scale(&(-&sign)));
        }
        Ok(QZSeries { coeffs: out })
    }

    /// The substitution `q -> 1/q`.
    pub fn invert_q(&self) -> Self {
        QZSeries {
            coeffs: self.coeffs.iter().map(QPolynomial::invert_q).collect(),
        }
    }

    /// Integer sequence `[z^n] S(z, 1)`.
    pub fn at_q_one(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(QPolynomial::sum).collect()
    }

    /// Integer sequence `[z^n q^0] S`.
    pub fn q_constant_term(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.coeff(0)).collect()
    }

    /// Floating-point values `[z^n] S(z, q)`.
    pub fn eval_q(&self, q: f64) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval_f64(q)).collect()
    }

    /// Whether every `[z^n q^m]` is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(QPolynomial::is_nonnegative)
    }

    /// Detects the parity pattern of the series, preferring [`ParityClass::Even`].
    pub fn parity_class(&self) -> Option<ParityClass> {
        if self.check_parity(ParityClass::Even).is_ok() {
            Some(ParityClass::Even)
        } else if self.check_parity(ParityClass::Odd).is_ok() {
            Some(ParityClass::Odd)
        } else {
            None
        }
    }

    fn check_parity(&self, class: ParityClass) -> Result<(), SeriesError> {
        for (n, c) in self.coeffs.iter().enumerate() {
            for (m, _) in c.terms() {
                let bad = match class {
                    ParityClass::Even => n % 2 == 1,
                    ParityClass::Odd => (m - n as i64).rem_euclid(2) != 0,
                };
                if bad {
                    return Err(SeriesError::ParityViolation { n, m });
                }
            }
        }
        Ok(())
    }

    /// Compresses the series by its parity pattern; see [`ParityClass`].
    pub fn parity_transform(&self, class: ParityClass) -> Result<Self, SeriesError> {
        self.check_parity(class)?;
        Ok(match class {
            ParityClass::Even => QZSeries {
                coeffs: self.coeffs.iter().step_by(2).cloned().collect(),
            },
            ParityClass::Odd => QZSeries {
                coeffs: self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| odd_compress(c, n))
                    .collect(),
            },
        })
    }

    /// Inverse of [`parity_transform`](Self::parity_transform).
    pub fn inverse_parity_transform(&self, class: ParityClass) -> Self {
        match class {
            ParityClass::Even => {
                let mut coeffs = Vec::with_capacity(2 * self.coeffs.len() - 1);
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        coeffs.push(QPolynomial::zero());
                    }
                    coeffs.push(c.clone());
                }
                QZSeries { coeffs }
            }
            ParityClass::Odd => QZSeries {
                coeffs: self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| {
                        let pairs: Vec<(i64, BigInt)> = c.terms().map(|(j, v)| (2 * j - n as i64, v.clone())).collect();
                        QPolynomial::from_pairs(&pairs)
                    })
                    .collect(),
            },
        }
    }

    /// Loop-basis coefficients of each `[z^n]`, which must be symmetric in `q`.
    pub fn loop_basis(&self) -> Result<Vec<Vec<BigInt>>, SeriesError> {
        self.coeffs.iter().map(QPolynomial::loop_basis).collect()
    }
}

fn odd_compress(c: &QPolynomial, n: usize) -> QPolynomial {
    if c.is_zero() {
        return QPolynomial::zero();
    }
    let coeffs: Vec<BigInt> = c.coeffs().iter().step_by(2).cloned().collect();
    QPolynomial::from_coeffs((c.min_exp() + n as i64) / 2, coeffs)
}

impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(i64, String)> = self.terms().map(|(m, c)| (m, c.to_string())).collect();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for t in &terms {
            seq.serialize_element(t)?;
        }
        seq.end()
    }
}

/// Serializes as `[{"n": 0, "q": [[m, "coeff"], ...]}, ...]`.
impl Serialize for QZSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(usize, &'a QPolynomial);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut st = serializer.serialize_struct("Row", 2)?;
                st.serialize_field("n", &self.0)?;
                st.serialize_field("q", self.1)?;
                st.end()
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (n, c) in self.coeffs.iter().enumerate() {
            seq.serialize_element(&Row(n, c))?;
        }
        seq.end()
    }
}

/// `binom(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
