use cogrowth_series::{sum_of_products, QPolynomial, QZSeries};

use crate::build::{Assembly, EquationSystem};
use crate::expr::{Node, NodeId};
use crate::{StarSeries, SystemError};

/// An unknown's coefficient that has not been computed yet.
#[derive(Debug, Clone, Copy)]
struct Pending;

/// Coefficient-by-coefficient evaluation of the expression graph. Each node's
/// coefficients are computed once, in increasing order of `z`, and memoized.
struct Evaluator<'a> {
    system: &'a EquationSystem,
    vars: Vec<Vec<QPolynomial>>,
    memo: Vec<Vec<QPolynomial>>,
}

impl<'a> Evaluator<'a> {
    fn new(system: &'a EquationSystem, vars: Vec<Vec<QPolynomial>>) -> Self {
        Evaluator {
            system,
            vars,
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

    fn get(&self, id: NodeId, n: usize) -> &QPolynomial {
        match &self.system.arena.nodes[id.0] {
            Node::Var(j) => &self.vars[*j][n],
            _ => &self.memo[id.0][n],
        }
    }

    /// Makes `x_i` and `y_j` available unless one of them is known to be zero.
    fn pair_needed(&mut self, x: (NodeId, usize), y: (NodeId, usize)) -> Result<bool, Pending> {
        let (first, second) = if x.1 <= y.1 { (x, y) } else { (y, x) };
        match self.ensure(first.0, first.1) {
            Ok(()) => {
                if self.get(first.0, first.1).is_zero() {
                    return Ok(false);
                }
                self.ensure(second.0, second.1)?;
                Ok(true)
            }
            Err(Pending) => {
                self.ensure(second.0, second.1)?;
                if self.get(second.0, second.1).is_zero() {
                    Ok(false)
                } else {
                    Err(Pending)
                }
            }
        }
    }

    fn compute(&mut self, id: NodeId, k: usize) -> Result<QPolynomial, Pending> {
        let system = self.system;
        Ok(match &system.arena.nodes[id.0] {
            Node::Const(c) => {
                if k == 0 {
                    c.clone()
                } else {
                    QPolynomial::zero()
                }
            }
            Node::Var(_) => unreachable!("variables are not memoized"),
            Node::ZShift(c) => {
                if k == 0 {
                    QPolynomial::zero()
                } else {
                    self.ensure(*c, k - 1)?;
                    self.get(*c, k - 1).clone()
                }
            }
            Node::QScale(p, c) => {
                self.ensure(*c, k)?;
                self.get(*c, k) * p
            }
            Node::Sum(terms) => {
                let mut acc = QPolynomial::zero();
                for (w, t) in terms {
                    self.ensure(*t, k)?;
                    let v = self.get(*t, k);
                    if *w == 1 {
                        acc += v;
                    } else {
                        acc += &v.scale(&(*w).into());
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
                let pairs: Vec<(&QPolynomial, &QPolynomial)> =
                    used.iter().map(|&t| (self.get(*a, t), self.get(*b, k - t))).collect();
                sum_of_products(&pairs)
            }
        })
    }

    fn series(&mut self, id: NodeId, order: usize) -> QZSeries {
        self.ensure(id, order)
            .expect("all unknowns are known to the requested order");
        QZSeries::from_coeffs((0..=order).map(|n| self.get(id, n).clone()).collect())
    }
}

/// Exact series solution of an [`EquationSystem`] to a fixed order in `z`.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub order: usize,
    /// Each unknown's series, in the system's order.
    pub unknowns: Vec<(String, QZSeries)>,
    /// Auxiliary named series registered by the system.
    pub derived: Vec<(String, QZSeries)>,
    /// `L0^(i)` per facet, for star-polygon systems.
    pub one_sided: Vec<QZSeries>,
    /// Primitive-walk series `P_i = 1 - 1/L0^(i)`, for star-polygon systems.
    pub primitives: Vec<QZSeries>,
    /// The full generating function, when the system has one.
    pub f: Option<QZSeries>,
}

impl SeriesSolution {
    /// Looks up an unknown or derived series by name.
    pub fn get(&self, name: &str) -> Option<&QZSeries> {
        self.unknowns
            .iter()
            .chain(&self.derived)
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    /// The assembled star-polygon series, when the system has them.
    pub fn star_series(&self) -> Option<StarSeries> {
        Some(StarSeries {
            order: self.order,
            one_sided: self.one_sided.clone(),
            primitives: self.primitives.clone(),
            f: self.f.clone().filter(|_| !self.one_sided.is_empty())?,
        })
    }

    /// The full generating function.
    pub fn f(&self) -> Result<&QZSeries, SystemError> {
        self.f.as_ref().ok_or(SystemError::NoAssembly)
    }
}

/// Solves `Y = Φ(z, Y, q)` exactly to order `order`.
///
/// Coefficients are produced in increasing powers of `z`; the coefficient of `z^n` of
/// every right-hand side may only depend on unknowns' coefficients below `n`, so a
/// single sweep over `n` gives the fixed point. Then `P_i` and `F` are assembled.
pub fn solve_series(system: &EquationSystem, order: usize) -> Result<SeriesSolution, SystemError> {
    let u = system.unknown_count();
    let mut ev = Evaluator::new(system, vec![Vec::with_capacity(order + 1); u]);
    for n in 0..=order {
        for j in 0..u {
            ev.ensure(system.rhs[j], n).map_err(|_| SystemError::ZFactorViolation {
                unknown: system.names[j].clone(),
                order: n,
            })?;
            let v = ev.get(system.rhs[j], n).clone();
            ev.vars[j].push(v);
        }
    }

    let unknowns: Vec<(String, QZSeries)> = (0..u)
        .map(|j| (system.names[j].clone(), QZSeries::from_coeffs(ev.vars[j].clone())))
        .collect();
    let derived = system
        .derived
        .iter()
        .map(|(name, id)| (name.clone(), ev.series(*id, order)))
        .collect();

    let (one_sided, primitives, f) = match &system.assembly {
        Assembly::Star { one_sided } => {
            let l0: Vec<QZSeries> = one_sided.iter().map(|&i| unknowns[i].1.clone()).collect();
            let one = QZSeries::one(order);
            let mut p = Vec::with_capacity(l0.len());
            let mut denom = one.clone();
            for l in &l0 {
                let pi = one.sub(&l.reciprocal()?)?;
                denom = denom.sub(&pi)?;
                p.push(pi);
            }
            let f = denom.reciprocal()?;
            (l0, p, Some(f))
        }
        Assembly::Unknown(i) => (Vec::new(), Vec::new(), Some(unknowns[*i].1.clone())),
        Assembly::None => (Vec::new(), Vec::new(), None),
    };

    Ok(SeriesSolution {
        order,
        unknowns,
        derived,
        one_sided,
        primitives,
        f,
    })
}

/// Substitutes `solution` into every right-hand side and returns the first
/// `(unknown, order)` where the two sides differ, if any.
pub fn substitution_residual(system: &EquationSystem, solution: &SeriesSolution) -> Option<(String, usize)> {
    let vars = solution.unknowns.iter().map(|(_, s)| s.coeffs().to_vec()).collect();
    let mut ev = Evaluator::new(system, vars);
    for (j, &r) in system.rhs.iter().enumerate() {
        let rhs = ev.series(r, solution.order);
        if let Some(n) = (0..=solution.order).find(|&n| rhs.coeff(n) != solution.unknowns[j].1.coeff(n)) {
            return Some((system.names[j].clone(), n));
        }
    }
    None
}
