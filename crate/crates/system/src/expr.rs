use std::fmt;

use cogrowth_series::QPolynomial;

/// Handle to a node of an [`EquationSystem`](crate::EquationSystem) expression graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub(crate) usize);

/// Expression node; children always precede their parents in the arena.
#[derive(Debug, Clone)]
pub(crate) enum Node {
    /// A polynomial in `q` at `z^0`.
    Const(QPolynomial),
    /// An unknown series.
    Var(usize),
    /// Integer-weighted sum.
    Sum(Vec<(i64, NodeId)>),
    Prod(NodeId, NodeId),
    /// Multiplication by `z`.
    ZShift(NodeId),
    /// Multiplication by a polynomial in `q`.
    QScale(QPolynomial, NodeId),
}

/// Arena of expression nodes shared by all equations of a system.
#[derive(Debug, Clone, Default)]
pub struct ExprArena {
    pub(crate) nodes: Vec<Node>,
}

impl ExprArena {
    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() - 1)
    }

    pub fn constant(&mut self, c: QPolynomial) -> NodeId {
        self.push(Node::Const(c))
    }

    pub fn one(&mut self) -> NodeId {
        self.constant(QPolynomial::one())
    }

    pub fn var(&mut self, index: usize) -> NodeId {
        self.push(Node::Var(index))
    }

    pub fn sum(&mut self, terms: &[NodeId]) -> NodeId {
        self.push(Node::Sum(terms.iter().map(|&t| (1, t)).collect()))
    }

    pub fn weighted_sum(&mut self, terms: &[(i64, NodeId)]) -> NodeId {
        self.push(Node::Sum(terms.to_vec()))
    }

    pub fn prod(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Prod(a, b))
    }

    /// Product of all factors, `1` when empty.
    pub fn product(&mut self, factors: &[NodeId]) -> NodeId {
        match factors {
            [] => self.one(),
            [first, rest @ ..] => rest.iter().fold(*first, |acc, &f| self.prod(acc, f)),
        }
    }

    pub fn z(&mut self, child: NodeId) -> NodeId {
        self.push(Node::ZShift(child))
    }

    pub fn qscale(&mut self, p: QPolynomial, child: NodeId) -> NodeId {
        self.push(Node::QScale(p, child))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unknowns referenced anywhere below `root`.
    pub(crate) fn vars_below(&self, root: NodeId) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root.0];
        let mut out = Vec::new();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            match &self.nodes[i] {
                Node::Const(_) => {}
                Node::Var(j) => out.push(*j),
                Node::Sum(ts) => stack.extend(ts.iter().map(|t| t.1 .0)),
                Node::Prod(a, b) => stack.extend([a.0, b.0]),
                Node::ZShift(c) | Node::QScale(_, c) => stack.push(c.0),
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Floating-point values and gradients (with respect to the unknowns) of every node.
    pub(crate) fn eval_f64(&self, z: f64, q: f64, y: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let u = y.len();
        let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let entry = match node {
                Node::Const(c) => (c.eval_f64(q), vec![0.0; u]),
                Node::Var(j) => {
                    let mut g = vec![0.0; u];
                    g[*j] = 1.0;
                    (y[*j], g)
                }
                Node::Sum(ts) => {
                    let mut v = 0.0;
                    let mut g = vec![0.0; u];
                    for (w, t) in ts {
                        let w = *w as f64;
                        let (tv, tg) = &out[t.0];
                        v += w * tv;
                        for (gi, ti) in g.iter_mut().zip(tg) {
                            *gi += w * ti;
                        }
                    }
                    (v, g)
                }
                Node::Prod(a, b) => {
                    let (av, ag) = &out[a.0];
                    let (bv, bg) = &out[b.0];
                    let g = ag.iter().zip(bg).map(|(x, y)| x * bv + av * y).collect();
                    (av * bv, g)
                }
                Node::ZShift(c) => {
                    let (cv, cg) = &out[c.0];
                    (z * cv, cg.iter().map(|x| z * x).collect())
                }
                Node::QScale(p, c) => {
                    let s = p.eval_f64(q);
                    let (cv, cg) = &out[c.0];
                    (s * cv, cg.iter().map(|x| s * x).collect())
                }
            };
            out.push(entry);
        }
        out
    }

    pub(crate) fn fmt_node(&self, id: NodeId, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.nodes[id.0] {
            Node::Const(c) => write!(f, "({c})"),
            Node::Var(j) => write!(f, "{}", names[*j]),
            Node::Sum(ts) => {
                write!(f, "(")?;
                for (i, (w, t)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if *w != 1 {
                        write!(f, "{w}*")?;
                    }
                    self.fmt_node(*t, names, f)?;
                }
                write!(f, ")")
            }
            Node::Prod(a, b) => {
                self.fmt_node(*a, names, f)?;
                write!(f, "*")?;
                self.fmt_node(*b, names, f)
            }
            Node::ZShift(c) => {
                write!(f, "z*")?;
                self.fmt_node(*c, names, f)
            }
            Node::QScale(p, c) => {
                write!(f, "({p})*")?;
                self.fmt_node(*c, names, f)
            }
        }
    }
}
