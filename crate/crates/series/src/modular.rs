//! Word-sized modular arithmetic, prime generation and Chinese remaindering.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime `p`; `a` must be nonzero modulo `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces a signed integer modulo `p`.
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// Reduces a big integer modulo `p`.
pub fn reduce_big(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.try_into().expect("residue fits in u64")
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`, in decreasing order.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Precomputed data for reconstructing integers from residues modulo fixed primes.
#[derive(Debug, Clone)]
pub struct Crt {
    primes: Vec<u64>,
    /// `inverses[i][j]` = `primes[j]^{-1} mod primes[i]` for `j < i`.
    inverses: Vec<Vec<u64>>,
    modulus: BigInt,
}

impl Crt {
    pub fn new(primes: &[u64]) -> Self {
        let inverses = primes
            .iter()
            .enumerate()
            .map(|(i, &pi)| primes[..i].iter().map(|&pj| inv_mod(pj % pi, pi)).collect())
            .collect();
        let modulus = primes.iter().fold(BigInt::one(), |acc, &p| acc * p);
        Crt {
            primes: primes.to_vec(),
            inverses,
            modulus,
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Bits of integers guaranteed to be recovered exactly (magnitude below `2^bits`).
    pub fn capacity_bits(&self) -> u64 {
        self.modulus.bits() - 2
    }

    /// The unique integer in `(-M/2, M/2]` with the given residues (Garner's algorithm).
    pub fn reconstruct(&self, residues: &[u64]) -> BigInt {
        let r = self.primes.len();
        let mut digits = vec![0u64; r];
        for i in 0..r {
            let p = self.primes[i];
            let mut x = residues[i] % p;
            for (d, inv) in digits[..i].iter().zip(&self.inverses[i]) {
                x = mul_mod(sub_mod(x, d % p, p), *inv, p);
            }
            digits[i] = x;
        }
        let mut acc = BigInt::zero();
        for i in (0..r).rev() {
            acc = acc * self.primes[i] + digits[i];
        }
        if &acc * 2 > self.modulus {
            acc - &self.modulus
        } else {
            acc
        }
    }
}
