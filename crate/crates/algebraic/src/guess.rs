use cogrowth_series::modular::{large_primes, reduce_big, Crt};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::AlgebraicError;

/// Extra terms required beyond the number of unknowns.
pub const SAFETY_MARGIN: usize = 50;

/// Rows used in the modular nullspace beyond the number of unknowns.
const EXTRA_ROWS: usize = 10;

/// Upper limit on primes used when reconstructing a candidate.
const MAX_PRIMES: usize = 256;

/// `Σ_{j=0..r} c_j(n) s(n+j) = 0` with `c_j(n) = Σ_d coeffs[j][d] n^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub order: usize,
    pub degree: usize,
    pub coeffs: Vec<Vec<BigInt>>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<Vec<BigInt>>) -> Result<Self, AlgebraicError> {
        let order = coeffs
            .len()
            .checked_sub(1)
            .ok_or(AlgebraicError::Malformed("empty recurrence".into()))?;
        let degree = coeffs.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1);
        if coeffs[order].iter().all(Zero::is_zero) {
            return Err(AlgebraicError::Malformed("leading coefficient is zero".into()));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|mut c| {
                c.resize(degree + 1, BigInt::zero());
                c
            })
            .collect();
        Ok(Recurrence { order, degree, coeffs })
    }

    /// `c_j(n)`.
    pub fn eval_coeff(&self, j: usize, n: u64) -> BigInt {
        let n = BigInt::from(n);
        self.coeffs[j].iter().rev().fold(BigInt::zero(), |acc, c| acc * &n + c)
    }

    /// `{"order": r, "degree": d, "coeffs": [[j, d, "<decimal>"], ...]}` with zero entries omitted.
    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (d, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    entries.push(json!([j, d, c.to_string()]));
                }
            }
        }
        json!({"order": self.order, "degree": self.degree, "coeffs": entries})
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraicError> {
        let bad = |m: &str| AlgebraicError::Malformed(m.to_string());
        let order = v["order"].as_u64().ok_or_else(|| bad("missing order"))? as usize;
        let degree = v["degree"].as_u64().ok_or_else(|| bad("missing degree"))? as usize;
        let mut coeffs = vec![vec![BigInt::zero(); degree + 1]; order + 1];
        for e in v["coeffs"].as_array().ok_or_else(|| bad("missing coeffs"))? {
            let j = e[0].as_u64().ok_or_else(|| bad("bad index"))? as usize;
            let d = e[1].as_u64().ok_or_else(|| bad("bad degree"))? as usize;
            let c: BigInt = e[2]
                .as_str()
                .ok_or_else(|| bad("coefficient must be a decimal string"))?
                .parse()
                .map_err(|_| bad("coefficient must be a decimal string"))?;
            if j > order || d > degree {
                return Err(bad("entry outside order/degree"));
            }
            coeffs[j][d] = c;
        }
        Recurrence::new(coeffs)
    }
}

/// Checks the recurrence exactly at every `n` with `n + order < seq.len()`.
pub fn verify_recurrence(rec: &Recurrence, seq: &[BigInt]) -> bool {
    verify_range(rec, seq, 0)
}

/// Checks the recurrence exactly for `n >= start`.
pub fn verify_range(rec: &Recurrence, seq: &[BigInt], start: usize) -> bool {
    if seq.len() <= rec.order {
        return false;
    }
    (start..seq.len() - rec.order).all(|n| {
        let s: BigInt = (0..=rec.order).map(|j| rec.eval_coeff(j, n as u64) * &seq[n + j]).sum();
        s.is_zero()
    })
}

/// Montgomery arithmetic modulo an odd `p < 2^62`.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont {
            p,
            pinv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn encode(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn decode(self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn inv(&self, a: u64) -> u64 {
        // a^(p-2) in Montgomery form
        let mut result = self.encode(1);
        let mut base = a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

/// Nullspace basis vector for the first free column of the matrix (row-major, `cols`
/// wide), or `None` if the matrix has full column rank. Entries are plain residues.
fn first_null_vector(matrix: &mut [u64], rows: usize, cols: usize, m: &Mont) -> Option<Vec<u64>> {
    let p = m.p;
    let mut pivots: Vec<usize> = Vec::new();
    let mut free = None;
    for (r, c) in (0..cols).enumerate() {
        let Some(pr) = (r..rows).find(|&i| matrix[i * cols + c] != 0) else {
            free = Some(c);
            break;
        };
        if pr != r {
            for k in 0..cols {
                matrix.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = m.inv(matrix[r * cols + c]);
        for k in c..cols {
            matrix[r * cols + k] = m.mul(matrix[r * cols + k], inv);
        }
        let (head, tail) = matrix.split_at_mut(r * cols);
        let (pivot_row, tail) = tail.split_at_mut(cols);
        let eliminate = |row: &mut [u64]| {
            let f = row[c];
            if f == 0 {
                return;
            }
            for k in c..cols {
                let s = m.mul(f, pivot_row[k]);
                let v = row[k];
                row[k] = if v >= s { v - s } else { v + p - s };
            }
        };
        head.chunks_mut(cols).for_each(eliminate);
        tail.chunks_mut(cols).for_each(eliminate);
        pivots.push(c);
    }
    let free = free?;
    let mut v = vec![0u64; cols];
    v[free] = 1;
    for (i, &pc) in pivots.iter().enumerate() {
        if pc < free {
            let x = m.decode(matrix[i * cols + free]);
            v[pc] = if x == 0 { 0 } else { p - x };
        }
    }
    Some(v)
}

/// Matrix of `n^d s(n+j)` for `n < rows`, column `j (degree+1) + d`, reduced mod `p`.
fn build_matrix(seq_mod: &[u64], order: usize, degree: usize, rows: usize, m: &Mont) -> Vec<u64> {
    let cols = (order + 1) * (degree + 1);
    let mut matrix = vec![0u64; rows * cols];
    for n in 0..rows {
        let nm = m.encode(n as u64);
        for j in 0..=order {
            let mut x = seq_mod[n + j];
            for d in 0..=degree {
                matrix[n * cols + j * (degree + 1) + d] = x;
                x = m.mul(x, nm);
            }
        }
    }
    matrix
}

fn null_vector_mod(seq: &[BigInt], order: usize, degree: usize, rows: usize, p: u64) -> Option<Vec<u64>> {
    let m = Mont::new(p);
    let seq_mod: Vec<u64> = seq[..rows + order].iter().map(|x| m.encode(reduce_big(x, p))).collect();
    let cols = (order + 1) * (degree + 1);
    let mut matrix = build_matrix(&seq_mod, order, degree, rows, &m);
    first_null_vector(&mut matrix, rows, cols, &m)
}

/// `a/b ≡ x (mod modulus)` with `|a|, b <= sqrt(modulus / 2)`.
fn rational_reconstruct(x: &BigInt, modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), x.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Lifts the modular nullspace vectors to a primitive integer vector.
fn lift(vectors: &[Vec<u64>], primes: &[u64]) -> Option<Vec<BigInt>> {
    let crt = Crt::new(primes);
    let modulus: BigInt = primes.iter().fold(BigInt::one(), |a, &p| a * p);
    let cols = vectors[0].len();
    let mut fracs = Vec::with_capacity(cols);
    for c in 0..cols {
        let residues: Vec<u64> = vectors.iter().map(|v| v[c]).collect();
        fracs.push(rational_reconstruct(&crt.reconstruct(&residues), &modulus)?);
    }
    let lcm = fracs.iter().fold(BigInt::one(), |acc, (_, b)| acc.lcm(b));
    let ints: Vec<BigInt> = fracs.iter().map(|(a, b)| a * (&lcm / b)).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

fn to_recurrence(vec: &[BigInt], order: usize, degree: usize) -> Option<Recurrence> {
    let mut coeffs: Vec<Vec<BigInt>> = vec.chunks(degree + 1).map(|c| c.to_vec()).collect();
    if coeffs[order].iter().all(Zero::is_zero) || coeffs[0].iter().all(Zero::is_zero) {
        return None;
    }
    let lead = coeffs[order].iter().rev().find(|c| !c.is_zero())?;
    if lead.is_negative() {
        for row in coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c = -&*c;
            }
        }
    }
    let degree = coeffs
        .iter()
        .filter_map(|row| row.iter().rposition(|c| !c.is_zero()))
        .max()?;
    for row in coeffs.iter_mut() {
        row.truncate(degree + 1);
    }
    Recurrence::new(coeffs).ok()
}

/// Finds a linear recurrence with polynomial coefficients of the smallest order up to
/// `max_order`, and for that order the smallest degree up to `max_degree`.
///
/// Nullspaces are computed modulo 62-bit primes on the first `(r+1)(d+1) + 10` rows;
/// the candidate is reconstructed by CRT and rational reconstruction and then verified
/// with exact integers on every available index.
pub fn guess_recurrence(
    seq: &[BigInt],
    max_order: usize,
    max_degree: usize,
) -> Result<Option<Recurrence>, AlgebraicError> {
    let need = (max_order + 1) * (max_degree + 1) + SAFETY_MARGIN;
    if seq.len() < need {
        return Err(AlgebraicError::InsufficientTerms { have: seq.len(), need });
    }
    let primes = large_primes(MAX_PRIMES);
    let rows_for = |r: usize, d: usize| ((r + 1) * (d + 1) + EXTRA_ROWS).min(seq.len() - r);
    for r in 1..=max_order {
        if null_vector_mod(seq, r, max_degree, rows_for(r, max_degree), primes[0]).is_none() {
            continue;
        }
        let (mut lo, mut hi) = (0, max_degree);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if null_vector_mod(seq, r, mid, rows_for(r, mid), primes[0]).is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        for d in lo..=max_degree {
            if let Some(rec) = reconstruct(seq, r, d, rows_for(r, d), &primes) {
                return Ok(Some(rec));
            }
        }
    }
    Ok(None)
}

fn reconstruct(seq: &[BigInt], r: usize, d: usize, rows: usize, primes: &[u64]) -> Option<Recurrence> {
    let mut used: Vec<u64> = Vec::new();
    let mut vectors: Vec<Vec<u64>> = Vec::new();
    let mut batch = 2;
    for &p in primes {
        let Some(v) = null_vector_mod(seq, r, d, rows, p) else {
            continue;
        };
        let shape = v.iter().rposition(|&x| x != 0);
        if vectors
            .first()
            .is_some_and(|v0| v0.iter().rposition(|&x| x != 0) != shape)
        {
            continue;
        }
        used.push(p);
        vectors.push(v);
        if used.len() < batch {
            continue;
        }
        batch *= 2;
        if let Some(vec) = lift(&vectors, &used) {
            if let Some(rec) = to_recurrence(&vec, r, d) {
                if verify_recurrence(&rec, seq) {
                    return Some(rec);
                }
            }
        }
    }
    None
}
