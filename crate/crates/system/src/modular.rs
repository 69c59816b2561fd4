//! Star-polygon series by evaluation at many values of `q` modulo word-sized primes.
//!
//! The series `F`, `L0^(i)` and `P_i` are invariant under `q -> 1/q`, so `[z^n]` is a
//! polynomial of degree at most `D_n = ⌊n/p⌋` in `Q = q + 1/q` (`p` the shortest period).
//! The system is solved at `D + 1` points per prime, each `[z^n]` is interpolated in
//! `Q`, expanded back to `q`, and the integers are recovered by Chinese remaindering.

use cogrowth_group::GroupSpec;
use cogrowth_series::modular::{add_mod, inv_mod, large_primes, mul_mod, reduce_big, reduce_i64, sub_mod, Crt};
use cogrowth_series::{QPolynomial, QZSeries};
use num_bigint::BigInt;

use crate::build::{build_star_system, Assembly, EquationSystem};
use crate::expr::{Node, NodeId};
use crate::SystemError;

/// The assembled series of a star-polygon system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSeries {
    pub order: usize,
    pub one_sided: Vec<QZSeries>,
    pub primitives: Vec<QZSeries>,
    pub f: QZSeries,
}

type Vals = Vec<u64>;

#[derive(Debug, Clone, Copy)]
struct Pending;

struct PointEvaluator<'a> {
    system: &'a EquationSystem,
    p: u64,
    width: usize,
    scalars: Vec<Option<Vals>>,
    vars: Vec<Vec<Vals>>,
    memo: Vec<Vec<Vals>>,
}

/// Products below `2^124` can be added 15 at a time in a `u128` before reducing.
const LAZY: usize = 15;

fn eval_points(poly: &QPolynomial, qs: &[u64], qinv: &[u64], p: u64) -> Vals {
    qs.iter()
        .zip(qinv)
        .map(|(&q, &qi)| {
            let mut acc = 0;
            for (e, c) in poly.terms() {
                let base = if e < 0 { qi } else { q };
                let term = mul_mod(
                    reduce_big(c, p),
                    cogrowth_series::modular::pow_mod(base, e.unsigned_abs(), p),
                    p,
                );
                acc = add_mod(acc, term, p);
            }
            acc
        })
        .collect()
}

impl<'a> PointEvaluator<'a> {
    fn new(system: &'a EquationSystem, p: u64, qs: &[u64]) -> Self {
        let qinv: Vec<u64> = qs.iter().map(|&q| inv_mod(q, p)).collect();
        let scalars = system
            .arena
            .nodes
            .iter()
            .map(|node| match node {
                Node::Const(c) | Node::QScale(c, _) => Some(eval_points(c, qs, &qinv, p)),
                _ => None,
            })
            .collect();
        PointEvaluator {
            system,
            p,
            width: qs.len(),
            scalars,
            vars: vec![Vec::new(); system.unknown_count()],
            memo: vec![Vec::new(); system.arena.len()],
        }
    }

    fn ensure(&mut self, id: NodeId, n: usize) -> Result<(), Pending> {
        let system = self.system;
        if let Node::Var(j) = &system.arena.nodes[id.0] {
            return if self.vars[*j].len() > n { Ok(()) } else { Err(Pending) };
        }
        while self.memo[id.0].len() <= n {
            let k = self.memo[id.0].len();
            let v = self.compute(id, k)?;
            self.memo[id.0].push(v);
        }
        Ok(())
    }

    fn get(&self, id: NodeId, n: usize) -> &Vals {
        match &self.system.arena.nodes[id.0] {
            Node::Var(j) => &self.vars[*j][n],
            _ => &self.memo[id.0][n],
        }
    }

    fn is_zero(&self, id: NodeId, n: usize) -> bool {
        self.get(id, n).iter().all(|&x| x == 0)
    }

    fn pair_needed(&mut self, x: (NodeId, usize), y: (NodeId, usize)) -> Result<bool, Pending> {
        let (first, second) = if x.1 <= y.1 { (x, y) } else { (y, x) };
        match self.ensure(first.0, first.1) {
            Ok(()) => {
                if self.is_zero(first.0, first.1) {
                    return Ok(false);
                }
                self.ensure(second.0, second.1)?;
                Ok(true)
            }
            Err(Pending) => {
                self.ensure(second.0, second.1)?;
                if self.is_zero(second.0, second.1) {
                    Ok(false)
                } else {
                    Err(Pending)
                }
            }
        }
    }

    fn compute(&mut self, id: NodeId, k: usize) -> Result<Vals, Pending> {
        let system = self.system;
        let p = self.p;
        Ok(match &system.arena.nodes[id.0] {
            Node::Const(_) => {
                if k == 0 {
                    self.scalars[id.0].clone().unwrap_or_default()
                } else {
                    vec![0; self.width]
                }
            }
            Node::Var(_) => unreachable!("variables are not memoized"),
            Node::ZShift(c) => {
                if k == 0 {
                    vec![0; self.width]
                } else {
                    self.ensure(*c, k - 1)?;
                    self.get(*c, k - 1).clone()
                }
            }
            Node::QScale(_, c) => {
                self.ensure(*c, k)?;
                let s = self.scalars[id.0].as_ref().expect("scale factor evaluated");
                self.get(*c, k).iter().zip(s).map(|(&x, &y)| mul_mod(x, y, p)).collect()
            }
            Node::Sum(terms) => {
                let mut acc = vec![0u64; self.width];
                for (w, t) in terms {
                    self.ensure(*t, k)?;
                    let w = reduce_i64(*w, p);
                    for (a, &x) in acc.iter_mut().zip(self.get(*t, k)) {
                        *a = add_mod(*a, mul_mod(x, w, p), p);
                    }
                }
                acc
            }
            Node::Prod(a, b) => {
                let mut used = Vec::new();
                for t in 0..=k {
                    if self.pair_needed((*a, t), (*b, k - t))? {
                        used.push(t);
                    }
                }
                let pairs: Vec<(&Vals, &Vals)> = used.iter().map(|&t| (self.get(*a, t), self.get(*b, k - t))).collect();
                dot(&pairs, self.width, p)
            }
        })
    }
}

/// Pointwise `Σ a_i · b_i`.
fn dot(pairs: &[(&Vals, &Vals)], width: usize, p: u64) -> Vals {
    let mut acc = vec![0u128; width];
    let mut out = vec![0u64; width];
    for chunk in pairs.chunks(LAZY) {
        for (a, b) in chunk {
            for ((s, &x), &y) in acc.iter_mut().zip(a.iter()).zip(b.iter()) {
                *s += x as u128 * y as u128;
            }
        }
        for (o, s) in out.iter_mut().zip(acc.iter_mut()) {
            *o = add_mod(*o, (*s % p as u128) as u64, p);
            *s = 0;
        }
    }
    out
}

/// Pointwise reciprocal of a series with constant term 1.
fn reciprocal(a: &[Vals], p: u64) -> Vec<Vals> {
    let width = a[0].len();
    let mut out: Vec<Vals> = vec![vec![1; width]];
    for n in 1..a.len() {
        let pairs: Vec<(&Vals, &Vals)> = (1..=n).map(|t| (&a[t], &out[n - t])).collect();
        let s = dot(&pairs, width, p);
        out.push(s.into_iter().map(|x| sub_mod(0, x, p)).collect());
    }
    out
}

/// Interpolates values at the nodes `xs` into monomial coefficients (Newton form first).
fn interpolate(xs: &[u64], inv_diff: &[Vec<u64>], values: &[u64], p: u64) -> Vec<u64> {
    let d = values.len();
    let mut c = values.to_vec();
    for j in 1..d {
        for i in (j..d).rev() {
            c[i] = mul_mod(sub_mod(c[i], c[i - 1], p), inv_diff[i][i - j], p);
        }
    }
    let mut poly = vec![0u64; d];
    poly[0] = c[d - 1];
    for (len, i) in (1..).zip((0..d - 1).rev()) {
        // poly = poly * (X - xs[i]) + c[i]
        let x = xs[i];
        for k in (0..=len).rev() {
            let hi = if k > 0 { poly[k - 1] } else { 0 };
            let lo = if k < len { mul_mod(poly[k], x, p) } else { 0 };
            poly[k] = sub_mod(hi, lo, p);
        }
        poly[0] = add_mod(poly[0], c[i], p);
    }
    poly
}

/// Coefficients of `q^0, q^1, ..., q^D` of `Σ_l d_l (q + 1/q)^l`.
fn expand_loop_basis(d: &[u64], p: u64) -> Vec<u64> {
    let top = d.len() - 1;
    let width = 2 * top + 1;
    let mut acc = vec![0u64; width];
    for l in (0..=top).rev() {
        let mut next = vec![0u64; width];
        for i in 0..width {
            if acc[i] == 0 {
                continue;
            }
            if i + 1 < width {
                next[i + 1] = add_mod(next[i + 1], acc[i], p);
            }
            if i > 0 {
                next[i - 1] = add_mod(next[i - 1], acc[i], p);
            }
        }
        next[top] = add_mod(next[top], d[l], p);
        acc = next;
    }
    acc[top..].to_vec()
}

/// Solves the star-polygon system for `spec` to order `order` by modular evaluation.
pub fn solve_star_modular(spec: &GroupSpec, order: usize) -> Result<StarSeries, SystemError> {
    let periods = spec.periods().ok_or(SystemError::NotStarPolygon)?;
    let system = build_star_system(spec)?;
    let Assembly::Star { one_sided } = system.assembly.clone() else {
        return Err(SystemError::NoAssembly);
    };
    let p_min = *periods.iter().min().unwrap_or(&2) as usize;
    let degree = |n: usize| n / p_min;
    let points = degree(order) + 1;
    let qs: Vec<u64> = (0..points as u64).map(|i| i + 2).collect();

    // Walk counts are below (2k)^n; loop-basis digits add at most `D` bits.
    let alphabet = 2.0 * periods.len() as f64;
    let bits = (order as f64 * alphabet.log2()).ceil() as u64 + degree(order) as u64 + 4;
    let mut count = 1;
    let crt = loop {
        let crt = Crt::new(&large_primes(count));
        if crt.capacity_bits() >= bits {
            break crt;
        }
        count += 1;
    };

    let k = one_sided.len();
    let series_count = 2 * k + 1;
    // residues[prime][series][n][m] for m = 0..=D_n
    let mut residues: Vec<Vec<Vec<Vec<u64>>>> = Vec::with_capacity(count);
    for &p in crt.primes() {
        let mut ev = PointEvaluator::new(&system, p, &qs);
        for n in 0..=order {
            for j in 0..system.unknown_count() {
                ev.ensure(system.rhs[j], n).map_err(|_| SystemError::ZFactorViolation {
                    unknown: system.names[j].clone(),
                    order: n,
                })?;
                let v = ev.get(system.rhs[j], n).clone();
                ev.vars[j].push(v);
            }
        }
        let l0: Vec<Vec<Vals>> = one_sided.iter().map(|&i| ev.vars[i].clone()).collect();
        let mut series = Vec::with_capacity(series_count);
        let mut denom: Vec<Vals> = vec![vec![0; points]; order + 1];
        denom[0] = vec![1; points];
        let mut prims = Vec::with_capacity(k);
        for l in &l0 {
            let r = reciprocal(l, p);
            let prim: Vec<Vals> = r
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    let one = u64::from(n == 0);
                    v.iter().map(|&x| sub_mod(one, x, p)).collect()
                })
                .collect();
            for (d, pr) in denom.iter_mut().zip(&prim) {
                for (x, &y) in d.iter_mut().zip(pr) {
                    *x = sub_mod(*x, y, p);
                }
            }
            prims.push(prim);
        }
        let f = reciprocal(&denom, p);
        series.push(f);
        series.extend(l0);
        series.extend(prims);

        let xs: Vec<u64> = qs.iter().map(|&q| add_mod(q, inv_mod(q, p), p)).collect();
        let inv_diff: Vec<Vec<u64>> = (0..points)
            .map(|i| (0..i).map(|j| inv_mod(sub_mod(xs[i], xs[j], p), p)).collect())
            .collect();
        let per_series = series
            .iter()
            .map(|s| {
                (0..=order)
                    .map(|n| {
                        let d = degree(n) + 1;
                        let basis = interpolate(&xs[..d], &inv_diff, &s[n][..d], p);
                        expand_loop_basis(&basis, p)
                    })
                    .collect()
            })
            .collect();
        residues.push(per_series);
    }

    let mut out: Vec<QZSeries> = Vec::with_capacity(series_count);
    for s in 0..series_count {
        let coeffs = (0..=order)
            .map(|n| {
                let top = degree(n);
                let half: Vec<BigInt> = (0..=top)
                    .map(|m| {
                        let r: Vec<u64> = residues.iter().map(|res| res[s][n][m]).collect();
                        crt.reconstruct(&r)
                    })
                    .collect();
                let full: Vec<BigInt> = half.iter().rev().chain(half.iter().skip(1)).cloned().collect();
                QPolynomial::from_coeffs(-(top as i64), full)
            })
            .collect();
        out.push(QZSeries::from_coeffs(coeffs));
    }
    let f = out.remove(0);
    let primitives = out.split_off(k);
    Ok(StarSeries {
        order,
        one_sided: out,
        primitives,
        f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = large_primes(1)[0];
        let xs = [3u64, 7, 11, 20];
        let poly = [5u64, 0, 2, 9];
        let values: Vec<u64> = xs
            .iter()
            .map(|&x| poly.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p)))
            .collect();
        let inv_diff: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..i).map(|j| inv_mod(sub_mod(xs[i], xs[j], p), p)).collect())
            .collect();
        assert_eq!(interpolate(&xs, &inv_diff, &values, p), poly.to_vec());
    }

    #[test]
    fn loop_basis_expansion() {
        // 2 + 3Q + Q^2 = q^2 + 3q + 4 + 3/q + 1/q^2
        assert_eq!(expand_loop_basis(&[2, 3, 1], 101), vec![4, 3, 1]);
    }
}
