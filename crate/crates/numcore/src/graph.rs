//! Minimal reverse-mode autodiff over dense matrices.
//!
//! Define-by-run: every builder method evaluates its value eagerly and
//! records the op on a tape. `backward` walks the tape once in reverse
//! and returns gradients for parameter nodes. Node ids are tape indices,
//! so construction order is already a topological order.

use crate::error::{Error, Result};
use crate::matrix::{sigmoid, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone)]
enum Op {
    Constant,
    Parameter,
    Matmul(NodeId, NodeId),
    Transpose(NodeId),
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Div(NodeId, NodeId),
    Relu(NodeId),
    Tanh(NodeId),
    Sigmoid(NodeId),
    Softplus(NodeId),
    Exp(NodeId),
    Log(NodeId),
    Sqrt(NodeId),
    Scale(NodeId, f64),
    AddScalar(NodeId, f64),
    Sum(NodeId),
    SumRows(NodeId),
    LogSoftmax(NodeId),
}

struct Node {
    op: Op,
    value: Matrix,
}

#[derive(Default)]
pub struct Graph {
    nodes: Vec<Node>,
    params: Vec<NodeId>,
}

/// Gradients for the graph's parameter nodes, in insertion order.
pub struct Gradients {
    by_param: Vec<(NodeId, Matrix)>,
}

impl Gradients {
    pub fn get(&self, id: NodeId) -> Option<&Matrix> {
        self.by_param.iter().find(|(p, _)| *p == id).map(|(_, g)| g)
    }

    pub fn into_vec(self) -> Vec<(NodeId, Matrix)> {
        self.by_param
    }

    pub fn is_empty(&self) -> bool {
        self.by_param.is_empty()
    }

    pub fn len(&self) -> usize {
        self.by_param.len()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    fn push(&mut self, op: Op, value: Matrix) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { op, value });
        id
    }

    pub fn constant(&mut self, value: Matrix) -> NodeId {
        self.push(Op::Constant, value)
    }

    pub fn parameter(&mut self, value: Matrix) -> NodeId {
        let id = self.push(Op::Parameter, value);
        self.params.push(id);
        id
    }

    pub fn value(&self, id: NodeId) -> &Matrix {
        &self.nodes[id.0].value
    }

    pub fn scalar_value(&self, id: NodeId) -> f64 {
        self.nodes[id.0].value.data()[0]
    }

    fn shape(&self, id: NodeId) -> (usize, usize) {
        self.nodes[id.0].value.shape()
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.value(a).matmul(self.value(b))?;
        Ok(self.push(Op::Matmul(a, b), v))
    }

    pub fn transpose(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).transpose();
        self.push(Op::Transpose(a), v)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.value(a).add(self.value(b))?;
        Ok(self.push(Op::Add(a, b), v))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.value(a).sub(self.value(b))?;
        Ok(self.push(Op::Sub(a, b), v))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.value(a).mul(self.value(b))?;
        Ok(self.push(Op::Mul(a, b), v))
    }

    pub fn div(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.value(a).div(self.value(b))?;
        Ok(self.push(Op::Div(a, b), v))
    }

    pub fn relu(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).relu();
        self.push(Op::Relu(a), v)
    }

    pub fn tanh(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).tanh();
        self.push(Op::Tanh(a), v)
    }

    pub fn sigmoid(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).sigmoid();
        self.push(Op::Sigmoid(a), v)
    }

    pub fn softplus(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).softplus();
        self.push(Op::Softplus(a), v)
    }

    pub fn exp(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).exp();
        self.push(Op::Exp(a), v)
    }

    pub fn log(&mut self, a: NodeId) -> Result<NodeId> {
        let v = self.value(a).ln()?;
        Ok(self.push(Op::Log(a), v))
    }

    pub fn sqrt(&mut self, a: NodeId) -> Result<NodeId> {
        let v = self.value(a).sqrt()?;
        Ok(self.push(Op::Sqrt(a), v))
    }

    pub fn scale(&mut self, a: NodeId, c: f64) -> NodeId {
        let v = self.value(a).scale(c);
        self.push(Op::Scale(a, c), v)
    }

    pub fn add_scalar(&mut self, a: NodeId, c: f64) -> NodeId {
        let v = self.value(a).add_scalar(c);
        self.push(Op::AddScalar(a, c), v)
    }

    /// Full reduction to a 1x1 scalar.
    pub fn sum(&mut self, a: NodeId) -> NodeId {
        let v = Matrix::from_vec(1, 1, vec![self.value(a).sum()]).unwrap();
        self.push(Op::Sum(a), v)
    }

    pub fn sum_rows(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a).sum_rows();
        self.push(Op::SumRows(a), v)
    }

    /// Row-wise log-softmax, computed with the max-shift trick.
    pub fn log_softmax(&mut self, a: NodeId) -> NodeId {
        let x = self.value(a);
        let mut v = x.clone();
        for r in 0..x.rows() {
            let row = x.row(r);
            let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lse = m + row.iter().map(|&e| (e - m).exp()).sum::<f64>().ln();
            for c in 0..x.cols() {
                v.set(r, c, x.get(r, c) - lse);
            }
        }
        self.push(Op::LogSoftmax(a), v)
    }

    // --- composite helpers -------------------------------------------------

    /// Mean of squared differences over all entries.
    pub fn mse(&mut self, x: NodeId, x_recon: NodeId) -> Result<NodeId> {
        let d = self.sub(x_recon, x)?;
        let sq = self.mul(d, d)?;
        let s = self.sum(sq);
        let (r, c) = self.shape(x);
        Ok(self.scale(s, 1.0 / (r * c) as f64))
    }

    /// Reparameterized Gaussian draw: mu + exp(logvar/2) .* eps, with eps
    /// entering as a constant so gradients flow only to mu and logvar.
    pub fn reparam_sample(&mut self, mu: NodeId, logvar: NodeId, eps: Matrix) -> Result<NodeId> {
        if self.shape(mu) != self.shape(logvar) {
            return Err(Error::dim(
                "reparam_sample",
                self.shape(mu),
                self.shape(logvar),
            ));
        }
        if self.shape(mu) != eps.shape() {
            return Err(Error::dim("reparam_sample", self.shape(mu), eps.shape()));
        }
        let half = self.scale(logvar, 0.5);
        let std = self.exp(half);
        let e = self.constant(eps);
        let noise = self.mul(std, e)?;
        self.add(mu, noise)
    }

    /// 0.5 * sum(mu^2 + e^logvar - 1 - logvar), the KL to a standard normal.
    pub fn kl_std_normal(&mut self, mu: NodeId, logvar: NodeId) -> Result<NodeId> {
        if self.shape(mu) != self.shape(logvar) {
            return Err(Error::dim("kl_std_normal", self.shape(mu), self.shape(logvar)));
        }
        let mu2 = self.mul(mu, mu)?;
        let ev = self.exp(logvar);
        let a = self.add(mu2, ev)?;
        let b = self.sub(a, logvar)?;
        let c = self.add_scalar(b, -1.0);
        let s = self.sum(c);
        Ok(self.scale(s, 0.5))
    }

    /// KL between two diagonal Gaussians, closed form, summed over entries.
    pub fn kl_diag(
        &mut self,
        mu1: NodeId,
        lv1: NodeId,
        mu2: NodeId,
        lv2: NodeId,
    ) -> Result<NodeId> {
        // 0.5 * sum(lv2 - lv1 + (e^lv1 + (mu1-mu2)^2) * e^-lv2 - 1)
        let dlv = self.sub(lv2, lv1)?;
        let v1 = self.exp(lv1);
        let dmu = self.sub(mu1, mu2)?;
        let dmu2 = self.mul(dmu, dmu)?;
        let num = self.add(v1, dmu2)?;
        let neg_lv2 = self.scale(lv2, -1.0);
        let inv_v2 = self.exp(neg_lv2);
        let ratio = self.mul(num, inv_v2)?;
        let s1 = self.add(dlv, ratio)?;
        let s2 = self.add_scalar(s1, -1.0);
        let s = self.sum(s2);
        Ok(self.scale(s, 0.5))
    }

    // --- backward ----------------------------------------------------------

    /// Reverse accumulation from a scalar loss node. Returns gradients for
    /// every parameter node; an empty set when the graph has no parameters.
    pub fn backward(&mut self, loss: NodeId) -> Result<Gradients> {
        if self.shape(loss) != (1, 1) {
            return Err(Error::Contract(format!(
                "backward requires a 1x1 loss node, got {:?}",
                self.shape(loss)
            )));
        }
        let mut grads: Vec<Option<Matrix>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(Matrix::filled(1, 1, 1.0));

        for i in (0..=loss.0).rev() {
            let g = match grads[i].take() {
                Some(g) => g,
                None => continue,
            };
            let op = self.nodes[i].op.clone();
            match op {
                Op::Constant | Op::Parameter => {
                    grads[i] = Some(g);
                    continue;
                }
                Op::Matmul(a, b) => {
                    let bt = self.value(b).transpose();
                    let at = self.value(a).transpose();
                    let ga = g.matmul(&bt)?;
                    let gb = at.matmul(&g)?;
                    self.accumulate(&mut grads, a, ga);
                    self.accumulate(&mut grads, b, gb);
                }
                Op::Transpose(a) => {
                    self.accumulate(&mut grads, a, g.transpose());
                }
                Op::Add(a, b) => {
                    self.accumulate(&mut grads, a, g.clone());
                    self.accumulate_broadcast(&mut grads, b, g);
                }
                Op::Sub(a, b) => {
                    self.accumulate(&mut grads, a, g.clone());
                    self.accumulate_broadcast(&mut grads, b, g.scale(-1.0));
                }
                Op::Mul(a, b) => {
                    let ga = g.mul(self.value(b))?;
                    let gb = g.mul(self.value(a))?;
                    self.accumulate(&mut grads, a, ga);
                    self.accumulate_broadcast(&mut grads, b, gb);
                }
                Op::Div(a, b) => {
                    let ga = g.div(self.value(b))?;
                    // d/db (a/b) = -a / b^2
                    let b2 = self.value(b).mul(self.value(b))?;
                    let gb = g.mul(self.value(a))?.div(&b2)?.scale(-1.0);
                    self.accumulate(&mut grads, a, ga);
                    self.accumulate_broadcast(&mut grads, b, gb);
                }
                Op::Relu(a) => {
                    let mask = self.value(a).map(|x| if x > 0.0 { 1.0 } else { 0.0 });
                    self.accumulate(&mut grads, a, g.mul(&mask)?);
                }
                Op::Tanh(a) => {
                    let t = &self.nodes[i].value;
                    let d = t.map(|y| 1.0 - y * y);
                    self.accumulate(&mut grads, a, g.mul(&d)?);
                }
                Op::Sigmoid(a) => {
                    let s = &self.nodes[i].value;
                    let d = s.map(|y| y * (1.0 - y));
                    self.accumulate(&mut grads, a, g.mul(&d)?);
                }
                Op::Softplus(a) => {
                    let d = self.value(a).map(sigmoid);
                    self.accumulate(&mut grads, a, g.mul(&d)?);
                }
                Op::Exp(a) => {
                    let d = self.nodes[i].value.clone();
                    self.accumulate(&mut grads, a, g.mul(&d)?);
                }
                Op::Log(a) => {
                    self.accumulate(&mut grads, a, g.div(self.value(a))?);
                }
                Op::Sqrt(a) => {
                    let d = self.nodes[i].value.map(|y| 0.5 / y);
                    self.accumulate(&mut grads, a, g.mul(&d)?);
                }
                Op::Scale(a, c) => {
                    self.accumulate(&mut grads, a, g.scale(c));
                }
                Op::AddScalar(a, _) => {
                    self.accumulate(&mut grads, a, g);
                }
                Op::Sum(a) => {
                    let (r, c) = self.shape(a);
                    self.accumulate(&mut grads, a, Matrix::filled(r, c, g.data()[0]));
                }
                Op::SumRows(a) => {
                    let (r, c) = self.shape(a);
                    let mut ga = Matrix::zeros(r, c);
                    for rr in 0..r {
                        let gv = g.get(rr, 0);
                        for cc in 0..c {
                            ga.set(rr, cc, gv);
                        }
                    }
                    self.accumulate(&mut grads, a, ga);
                }
                Op::LogSoftmax(a) => {
                    // dx = g - softmax(x) * rowsum(g)
                    let y = &self.nodes[i].value;
                    let p = y.exp();
                    let (r, c) = y.shape();
                    let mut ga = Matrix::zeros(r, c);
                    for rr in 0..r {
                        let gsum: f64 = g.row(rr).iter().sum();
                        for cc in 0..c {
                            ga.set(rr, cc, g.get(rr, cc) - p.get(rr, cc) * gsum);
                        }
                    }
                    self.accumulate(&mut grads, a, ga);
                }
            }
        }

        let by_param = self
            .params
            .iter()
            .map(|&p| {
                let g = grads[p.0]
                    .take()
                    .unwrap_or_else(|| Matrix::zeros(self.shape(p).0, self.shape(p).1));
                (p, g)
            })
            .collect();
        Ok(Gradients { by_param })
    }

    fn accumulate(&self, grads: &mut [Option<Matrix>], id: NodeId, g: Matrix) {
        match &mut grads[id.0] {
            Some(existing) => *existing = existing.add(&g).expect("gradient shape fixed"),
            slot @ None => *slot = Some(g),
        }
    }

    /// Like `accumulate`, but folds an MxN gradient down to 1xN when the
    /// target was broadcast as a bias row.
    fn accumulate_broadcast(&self, grads: &mut [Option<Matrix>], id: NodeId, g: Matrix) {
        let target = self.shape(id);
        let g = if target.0 == 1 && g.rows() > 1 && g.cols() == target.1 {
            g.sum_cols()
        } else {
            g
        };
        self.accumulate(grads, id, g);
    }
}
