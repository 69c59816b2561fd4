use cogrowth_series::modular::{add_mod, inv_mod, large_primes, mul_mod, reduce_big, sub_mod, Crt};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::{AlgebraicError, PolynomialEquation};

/// Number of `u128` products that can be summed before reducing (each is below `2^124`).
const LAZY: usize = 15;

/// The constant term in `q` of every coefficient of the series solution, without
/// forming the full `q`-expansion.
///
/// The coefficient of `z^n` is a polynomial of degree at most `q_degree` in
/// `Q = q + 1/q`. It is evaluated at `q_degree + 1` points modulo word-sized primes and
/// mapped to its constant term in `q` by a precomputed linear functional. `growth` bounds
/// the coefficients by `growth^n`, which fixes the number of primes.
pub fn constant_term_sequence(
    eq: &PolynomialEquation,
    f0: i64,
    order: usize,
    q_degree: usize,
    growth: f64,
) -> Result<Vec<BigInt>, AlgebraicError> {
    let f0 = BigInt::from(f0);
    let slope = eq.simple_root_slope(&f0)?;
    let bits = (order as f64 * growth.max(1.0).log2()).ceil() as u64 + 4;
    let count = (bits / 61 + 2) as usize;
    let primes: Vec<u64> = large_primes(count + 4)
        .into_iter()
        .filter(|&p| reduce_big(&slope, p) != 0)
        .take(count)
        .collect();
    let crt = Crt::new(&primes);
    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| constant_terms_mod(eq, &f0, &slope, order, q_degree, p))
        .collect();
    Ok((0..=order)
        .map(|n| {
            let r: Vec<u64> = residues.iter().map(|v| v[n]).collect();
            crt.reconstruct(&r)
        })
        .collect())
}

/// Weights `w` with `Σ_i w_i v(x_i) = Σ_{l even} d_l binom(l, l/2)` for every polynomial
/// `v = Σ d_l Q^l` of degree below `xs.len()`.
fn constant_term_weights(xs: &[u64], p: u64) -> Vec<u64> {
    let m = xs.len();
    let mut central = vec![0u64; m];
    let mut c = 1u64;
    for l in (0..m).step_by(2) {
        if l > 0 {
            let num = mul_mod(l as u64, l as u64 - 1, p);
            let den = mul_mod(l as u64 / 2, l as u64 / 2, p);
            c = mul_mod(mul_mod(c, num, p), inv_mod(den, p), p);
        }
        central[l] = c;
    }
    // master = Π (x - x_j), lowest coefficient first
    let mut master = vec![1u64];
    for &x in xs {
        let mut next = vec![0u64; master.len() + 1];
        for (k, &a) in master.iter().enumerate() {
            next[k + 1] = add_mod(next[k + 1], a, p);
            next[k] = sub_mod(next[k], mul_mod(a, x, p), p);
        }
        master = next;
    }
    xs.iter()
        .map(|&xi| {
            // quotient = master / (x - xi) by synthetic division from the top
            let mut quot = vec![0u64; m];
            let mut carry = 0u64;
            for k in (1..=m).rev() {
                carry = add_mod(master[k], mul_mod(carry, xi, p), p);
                quot[k - 1] = carry;
            }
            let mut denom = 0u64;
            for k in (0..m).rev() {
                denom = add_mod(mul_mod(denom, xi, p), quot[k], p);
            }
            let mut acc = 0u64;
            for l in (0..m).step_by(2) {
                acc = add_mod(acc, mul_mod(central[l], quot[l], p), p);
            }
            mul_mod(acc, inv_mod(denom, p), p)
        })
        .collect()
}

/// `acc[i] += Σ_t a_t[i] b_t[i]` over the listed pairs, reduced modulo `p`.
fn dot_into(out: &mut [u64], pairs: &[(&[u64], &[u64])], p: u64) {
    let w = out.len();
    let mut acc = vec![0u128; w];
    for chunk in pairs.chunks(LAZY) {
        for (a, b) in chunk {
            for ((x, &ai), &bi) in acc.iter_mut().zip(a.iter()).zip(b.iter()) {
                *x += ai as u128 * bi as u128;
            }
        }
        for x in acc.iter_mut() {
            *x %= p as u128;
        }
    }
    for (o, &x) in out.iter_mut().zip(&acc) {
        *o = add_mod(*o, x as u64, p);
    }
}

fn constant_terms_mod(
    eq: &PolynomialEquation,
    f0: &BigInt,
    slope: &BigInt,
    order: usize,
    q_degree: usize,
    p: u64,
) -> Vec<u64> {
    let xs: Vec<u64> = (1..=q_degree as u64 + 1).collect();
    let w = xs.len();
    let weights = constant_term_weights(&xs, p);
    let deg = eq.degree();
    let zdeg = eq.z_degree();
    let eval = |j: usize, i: usize| -> Vec<u64> {
        let c = eq.coeff(j, i);
        xs.iter()
            .map(|&x| {
                let mut v = 0u64;
                for e in (0..=c.max_exp().max(0)).rev() {
                    v = add_mod(mul_mod(v, x, p), reduce_big(&c.coeff(e), p), p);
                }
                v
            })
            .collect()
    };
    let table: Vec<Vec<Vec<u64>>> = (0..=deg).map(|j| (0..=zdeg).map(|i| eval(j, i)).collect()).collect();
    let f0p = reduce_big(f0, p);
    let neg_inv_slope = sub_mod(0, inv_mod(reduce_big(slope, p), p), p);
    let lin: Vec<u64> = (0..=deg)
        .map(|j| {
            if j == 0 {
                0
            } else {
                mul_mod(j as u64 % p, cogrowth_series::modular::pow_mod(f0p, j as u64 - 1, p), p)
            }
        })
        .collect();

    let mut powers: Vec<Vec<Vec<u64>>> = vec![Vec::with_capacity(order + 1); deg + 1];
    for (j, pw) in powers.iter_mut().enumerate().skip(1) {
        pw.push(vec![cogrowth_series::modular::pow_mod(f0p, j as u64, p); w]);
    }
    let mut out = Vec::with_capacity(order + 1);
    out.push(f0p);
    for n in 1..=order {
        let mut partial = vec![vec![0u64; w]; deg + 1];
        for j in 2..=deg {
            let pairs: Vec<(&[u64], &[u64])> = (1..n).map(|t| (&powers[j - 1][t][..], &powers[1][n - t][..])).collect();
            let mut v = vec![0u64; w];
            dot_into(&mut v, &pairs, p);
            for i in 0..w {
                v[i] = add_mod(v[i], mul_mod(partial[j - 1][i], f0p, p), p);
            }
            partial[j] = v;
        }
        let mut known = if n <= zdeg { table[0][n].clone() } else { vec![0u64; w] };
        for j in 1..=deg {
            let mut pairs: Vec<(&[u64], &[u64])> = Vec::new();
            for i in 1..=n.min(zdeg) {
                if table[j][i].iter().any(|&x| x != 0) {
                    pairs.push((&table[j][i][..], &powers[j][n - i][..]));
                }
            }
            pairs.push((&table[j][0][..], &partial[j][..]));
            dot_into(&mut known, &pairs, p);
        }
        let fnv: Vec<u64> = known.iter().map(|&k| mul_mod(k, neg_inv_slope, p)).collect();
        let mut ct = 0u64;
        for i in 0..w {
            ct = add_mod(ct, mul_mod(weights[i], fnv[i], p), p);
        }
        out.push(ct);
        for j in 1..=deg {
            let v: Vec<u64> = (0..w)
                .map(|i| add_mod(partial[j][i], mul_mod(lin[j], fnv[i], p), p))
                .collect();
            powers[j].push(v);
        }
    }
    out
}
