use std::fmt;

use cogrowth_group::GroupSpec;
use cogrowth_series::QPolynomial;

use crate::expr::{ExprArena, NodeId};
use crate::SystemError;

/// How the full generating function `F` is obtained from the solved unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assembly {
    /// `F = 1 / (1 - Σ_i P_i)` with `P_i = 1 - 1/L0^(i)`; holds the unknown index of each `L0^(i)`.
    Star { one_sided: Vec<usize> },
    /// `F` is the unknown with this index.
    Unknown(usize),
    /// No `F` is attached (a subsystem used for singularity analysis).
    None,
}

/// A system `Y = Φ(z, Y, q)` of polynomial equations, one per unknown, sharing one expression graph.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    pub(crate) arena: ExprArena,
    pub(crate) names: Vec<String>,
    pub(crate) rhs: Vec<NodeId>,
    pub(crate) derived: Vec<(String, NodeId)>,
    pub(crate) assembly: Assembly,
}

impl EquationSystem {
    /// Starts an empty system whose unknowns have the given names.
    pub fn new(names: Vec<String>) -> Self {
        EquationSystem {
            arena: ExprArena::default(),
            rhs: Vec::new(),
            names,
            derived: Vec::new(),
            assembly: Assembly::None,
        }
    }

    pub fn arena(&mut self) -> &mut ExprArena {
        &mut self.arena
    }

    /// Installs the right-hand sides, one per unknown in order.
    pub fn set_rhs(&mut self, rhs: Vec<NodeId>) {
        assert_eq!(rhs.len(), self.names.len(), "one right-hand side per unknown");
        self.rhs = rhs;
    }

    /// Registers a named auxiliary series computed alongside the unknowns.
    pub fn add_derived(&mut self, name: &str, node: NodeId) {
        self.derived.push((name.to_string(), node));
    }

    pub fn set_assembly(&mut self, assembly: Assembly) {
        self.assembly = assembly;
    }

    pub fn assembly(&self) -> &Assembly {
        &self.assembly
    }

    pub fn unknown_names(&self) -> &[String] {
        &self.names
    }

    pub fn unknown_count(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn derived_names(&self) -> impl Iterator<Item = &str> {
        self.derived.iter().map(|(n, _)| n.as_str())
    }

    /// Whether every unknown depends, directly or indirectly, on every other one.
    pub fn is_strongly_connected(&self) -> bool {
        let u = self.names.len();
        let mut reach = vec![vec![false; u]; u];
        for (i, &r) in self.rhs.iter().enumerate() {
            for j in self.arena.vars_below(r) {
                reach[i][j] = true;
            }
        }
        for k in 0..u {
            for i in 0..u {
                if reach[i][k] {
                    let via = reach[k].clone();
                    for (r, v) in reach[i].iter_mut().zip(via) {
                        *r |= v;
                    }
                }
            }
        }
        reach.iter().all(|row| row.iter().all(|&x| x))
    }

    /// Right-hand side values `Φ(z, y, q)` and the Jacobian `∂Φ/∂Y` in floating point.
    pub fn eval_f64(&self, z: f64, q: f64, y: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let all = self.arena.eval_f64(z, q, y);
        let values = self.rhs.iter().map(|r| all[r.0].0).collect();
        let jac = self.rhs.iter().map(|r| all[r.0].1.clone()).collect();
        (values, jac)
    }

    /// Floating-point value of the assembled `F` at a point `(z, y, q)`, when defined.
    pub fn assemble_f64(&self, y: &[f64]) -> Option<f64> {
        match &self.assembly {
            Assembly::Star { one_sided } => {
                let s: f64 = one_sided.iter().map(|&i| 1.0 - 1.0 / y[i]).sum();
                Some(1.0 / (1.0 - s))
            }
            Assembly::Unknown(i) => Some(y[*i]),
            Assembly::None => None,
        }
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, &r) in self.names.iter().zip(&self.rhs) {
            write!(f, "{name} = ")?;
            self.arena.fmt_node(r, &self.names, f)?;
            writeln!(f)?;
        }
        for (name, r) in &self.derived {
            write!(f, "{name} := ")?;
            self.arena.fmt_node(*r, &self.names, f)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

fn q_pow(e: i64) -> QPolynomial {
    QPolynomial::monomial(1, e)
}

/// Name of the unknown `L_j^(i)` (facet `i` is 1-based).
pub fn one_sided_name(j: usize, facet: usize) -> String {
    format!("L{j}_{facet}")
}

/// Which connecting factor the star-polygon system uses between facets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarVariant {
    /// Walks at a polygon vertex that stay in the other facets' one-sided graphs:
    /// `R_i = 1 / (1 - Σ_{j≠i} P_j)`, carried as extra unknowns when there are three or more facets.
    Exact,
    /// The factor `Σ_{j≠i} L0^(j)`; equal to the exact one for two facets only.
    SumOfOthers,
}

/// The one-sided system for `G(p1,...,pk)`: unknowns `L_j^(i)` for `0 <= j < p_i`, plus
/// connecting unknowns `R_i` when `k >= 3`.
pub fn build_star_system(spec: &GroupSpec) -> Result<EquationSystem, SystemError> {
    build_star_system_variant(spec, StarVariant::Exact)
}

/// [`build_star_system`] with an explicit choice of connecting factor.
pub fn build_star_system_variant(spec: &GroupSpec, variant: StarVariant) -> Result<EquationSystem, SystemError> {
    let periods: Vec<usize> = spec
        .periods()
        .ok_or(SystemError::NotStarPolygon)?
        .iter()
        .map(|&p| p as usize)
        .collect();
    let k = periods.len();
    let extra_r = variant == StarVariant::Exact && k >= 3;

    let mut names = Vec::new();
    let mut offset = Vec::with_capacity(k);
    for (i, &p) in periods.iter().enumerate() {
        offset.push(names.len());
        for j in 0..p {
            names.push(one_sided_name(j, i + 1));
        }
    }
    let r_offset = names.len();
    if extra_r {
        for i in 0..k {
            names.push(format!("R_{}", i + 1));
        }
    }

    let mut sys = EquationSystem::new(names);
    let a = &mut sys.arena;
    let var = |a: &mut ExprArena, i: usize, j: usize| a.var(offset[i] + j);

    // X_i = z[L1 + q L_{p-1}], so that L0 = 1 + X_i.
    let mut x = Vec::with_capacity(k);
    let mut l0_rhs = Vec::with_capacity(k);
    for (i, &p) in periods.iter().enumerate() {
        let l1 = var(a, i, 1);
        let last = var(a, i, p - 1);
        let ql = a.qscale(q_pow(1), last);
        let inner = a.sum(&[l1, ql]);
        let xi = a.z(inner);
        let one = a.one();
        l0_rhs.push(a.sum(&[one, xi]));
        x.push(xi);
    }

    let mut connect = Vec::with_capacity(k);
    let mut r_rhs = Vec::new();
    for i in 0..k {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let factor = match variant {
            StarVariant::SumOfOthers => {
                let terms: Vec<NodeId> = others.iter().map(|&j| l0_rhs[j]).collect();
                a.sum(&terms)
            }
            StarVariant::Exact if k == 2 => l0_rhs[others[0]],
            StarVariant::Exact => {
                // R_i (1 - E_i) = Π_{j≠i} L0^(j), E_i = Σ_{|S|>=2} (|S|-1) Π_{j∈S} X_j.
                let factors: Vec<NodeId> = others.iter().map(|&j| l0_rhs[j]).collect();
                let head = a.product(&factors);
                let mut e_terms = Vec::new();
                for mask in 1usize..(1 << others.len()) {
                    let size = mask.count_ones() as i64;
                    if size < 2 {
                        continue;
                    }
                    let subset: Vec<NodeId> = others
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &j)| x[j])
                        .collect();
                    let term = a.product(&subset);
                    e_terms.push((size - 1, term));
                }
                let e = a.weighted_sum(&e_terms);
                let r_var = a.var(r_offset + i);
                let tail = a.prod(e, r_var);
                r_rhs.push(a.sum(&[head, tail]));
                r_var
            }
        };
        connect.push(factor);
    }

    let mut rhs = Vec::new();
    for (i, &p) in periods.iter().enumerate() {
        rhs.push(l0_rhs[i]);
        for r in 1..p {
            let prev = var(a, i, r - 1);
            let next = if r == p - 1 {
                let l0 = var(a, i, 0);
                a.qscale(q_pow(-1), l0)
            } else {
                var(a, i, r + 1)
            };
            let inner = a.sum(&[prev, next]);
            let step = a.z(inner);
            rhs.push(a.prod(step, connect[i]));
        }
    }
    rhs.extend(r_rhs);
    sys.set_rhs(rhs);
    sys.set_assembly(Assembly::Star { one_sided: offset });
    Ok(sys)
}

/// The Schreier-graph system for B3 with generators `a` and `x = ab`.
///
/// Unknowns are `G00, G01, G02, G10, G20, F00, F01, F02`; the loop series
/// `L00 = z²G00`, `L01 = z + z²G02`, `L10 = z + z²G20` are shared subexpressions
/// reported as derived series. `F = F00`.
pub fn build_axa_system() -> EquationSystem {
    build_axa(true)
}

/// The `G`-equations of [`build_axa_system`] alone; this strongly connected part carries the
/// dominant singularity.
pub fn build_axa_branch_system() -> EquationSystem {
    build_axa(false)
}

fn build_axa(with_f: bool) -> EquationSystem {
    let mut names: Vec<String> = ["G00", "G01", "G02", "G10", "G20"].map(String::from).to_vec();
    if with_f {
        names.extend(["F00", "F01", "F02"].map(String::from));
    }
    let mut sys = EquationSystem::new(names);
    let a = &mut sys.arena;
    let [g00, g01, g02, g10, g20] = [0, 1, 2, 3, 4].map(|i| a.var(i));

    let z2 = |a: &mut ExprArena, n: NodeId| {
        let once = a.z(n);
        a.z(once)
    };
    let l00 = z2(a, g00);
    let one = a.one();
    let z_one = a.z(one);
    let g02z2 = z2(a, g02);
    let l01 = a.sum(&[z_one, g02z2]);
    let g20z2 = z2(a, g20);
    let l10 = a.sum(&[z_one, g20z2]);

    let mut rhs = Vec::new();
    // G00 = 1 + G00 L00 + G01 L10 + z q G02
    let t1 = a.prod(g00, l00);
    let t2 = a.prod(g01, l10);
    let zg02 = a.z(g02);
    let t3 = a.qscale(q_pow(1), zg02);
    rhs.push(a.sum(&[one, t1, t2, t3]));
    // G01 = G00 L01 + 2 G01 L00 + G02 L10
    let t1 = a.prod(g00, l01);
    let t2 = a.prod(g01, l00);
    let t3 = a.prod(g02, l10);
    rhs.push(a.weighted_sum(&[(1, t1), (2, t2), (1, t3)]));
    // G02 = z q^-1 G00 + G01 L01 + G02 L00
    let zg00 = a.z(g00);
    let t1 = a.qscale(q_pow(-1), zg00);
    let t2 = a.prod(g01, l01);
    let t3 = a.prod(g02, l00);
    rhs.push(a.sum(&[t1, t2, t3]));
    // G10 = 2 L00 G10 + L10 G00 + L01 G20
    let t1 = a.prod(l00, g10);
    let t2 = a.prod(l10, g00);
    let t3 = a.prod(l01, g20);
    rhs.push(a.weighted_sum(&[(2, t1), (1, t2), (1, t3)]));
    // G20 = L00 G20 + L10 G10 + z q G00
    let t1 = a.prod(l00, g20);
    let t2 = a.prod(l10, g10);
    let t3 = a.qscale(q_pow(1), zg00);
    rhs.push(a.sum(&[t1, t2, t3]));

    if with_f {
        let [f00, f01, f02] = [5, 6, 7].map(|i| a.var(i));
        // F00 = 1 + 2 F00 L00 + F01 L10 + q F02 L01
        let t1 = a.prod(f00, l00);
        let t2 = a.prod(f01, l10);
        let t3 = a.prod(f02, l01);
        let t3 = a.qscale(q_pow(1), t3);
        rhs.push(a.weighted_sum(&[(1, one), (2, t1), (1, t2), (1, t3)]));
        // F01 = F00 L01 + 2 F01 L00 + F02 L10
        let t1 = a.prod(f00, l01);
        let t2 = a.prod(f01, l00);
        let t3 = a.prod(f02, l10);
        rhs.push(a.weighted_sum(&[(1, t1), (2, t2), (1, t3)]));
        // F02 = q^-1 F00 L10 + F01 L01 + 2 F02 L00
        let t1 = a.prod(f00, l10);
        let t1 = a.qscale(q_pow(-1), t1);
        let t2 = a.prod(f01, l01);
        let t3 = a.prod(f02, l00);
        rhs.push(a.weighted_sum(&[(1, t1), (1, t2), (2, t3)]));
    }
    sys.set_rhs(rhs);
    sys.add_derived("L00", l00);
    sys.add_derived("L01", l01);
    sys.add_derived("L10", l10);
    sys.set_assembly(if with_f { Assembly::Unknown(5) } else { Assembly::None });
    sys
}
