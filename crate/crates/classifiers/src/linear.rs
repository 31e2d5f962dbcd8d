//! Linear and shallow neural classifiers: softmax regression, one-vs-rest
//! hinge SVM, and a single-hidden-layer MLP.

use crate::error::Result;
use crate::Hyper;
use numcore::graph::Graph;
use numcore::{derive_seed, AdamState, Matrix, Prng};

/// Multinomial softmax regression (also the MLP output layer shape).
#[derive(Debug, Clone)]
pub struct LinearSoftmax {
    pub w: Matrix,
    pub b: Matrix,
}

impl LinearSoftmax {
    pub fn logits(&self, x: &Matrix) -> Result<Matrix> {
        Ok(x.matmul(&self.w)?.add(&self.b)?)
    }

    pub fn proba(&self, x: &Matrix) -> Result<Matrix> {
        Ok(softmax_rows(&self.logits(x)?))
    }

    pub fn quantize_f32(&mut self) {
        self.w = self.w.quantize_f32();
        self.b = self.b.quantize_f32();
    }
}

pub fn softmax_rows(logits: &Matrix) -> Matrix {
    let mut out = logits.clone();
    for r in 0..logits.rows() {
        let row = logits.row(r);
        let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for c in 0..logits.cols() {
            let e = (logits.get(r, c) - m).exp();
            out.set(r, c, e);
            sum += e;
        }
        for c in 0..logits.cols() {
            out.set(r, c, out.get(r, c) / sum);
        }
    }
    out
}

fn one_hot(y_idx: &[usize], k: usize) -> Matrix {
    let mut m = Matrix::zeros(y_idx.len(), k);
    for (r, &c) in y_idx.iter().enumerate() {
        m.set(r, c, 1.0);
    }
    m
}

/// Full-batch Adam on softmax cross-entropy with L2 weight decay.
/// Weights start at zero, so training is deterministic without a seed.
pub fn train_logreg(x: &Matrix, y_idx: &[usize], k: usize, hyper: &Hyper) -> Result<LinearSoftmax> {
    let d = x.cols();
    let mut params = vec![Matrix::zeros(d, k), Matrix::zeros(1, k)];
    let mut adam = AdamState::for_params(hyper.lr, &params);
    let targets = one_hot(y_idx, k);
    let n = x.rows() as f64;

    for _ in 0..hyper.logreg_epochs {
        let mut g = Graph::new();
        let w = g.parameter(params[0].clone());
        let b = g.parameter(params[1].clone());
        let xs = g.constant(x.clone());
        let t = g.constant(targets.clone());
        let xw = g.matmul(xs, w)?;
        let logits = g.add(xw, b)?;
        let ls = g.log_softmax(logits);
        let picked = g.mul(t, ls)?;
        let ce_sum = g.sum(picked);
        let ce = g.scale(ce_sum, -1.0 / n);
        let w2 = g.mul(w, w)?;
        let reg_sum = g.sum(w2);
        let reg = g.scale(reg_sum, hyper.logreg_l2);
        let loss = g.add(ce, reg)?;
        let grads = g.backward(loss)?;
        let grad_mats: Vec<Matrix> = grads.into_vec().into_iter().map(|(_, m)| m).collect();
        adam.step(&mut params, &grad_mats)?;
    }

    let mut model = LinearSoftmax {
        w: params.remove(0),
        b: params.remove(0),
    };
    model.quantize_f32();
    Ok(model)
}

/// One-vs-rest linear SVM trained with per-sample subgradient steps and a
/// 1/t learning-rate decay per epoch. Scores become probabilities via a
/// softmax over margins.
#[derive(Debug, Clone)]
pub struct SvmOvr {
    pub w: Matrix,
    pub b: Matrix,
}

impl SvmOvr {
    pub fn margins(&self, x: &Matrix) -> Result<Matrix> {
        Ok(x.matmul(&self.w)?.add(&self.b)?)
    }

    pub fn proba(&self, x: &Matrix) -> Result<Matrix> {
        Ok(softmax_rows(&self.margins(x)?))
    }

    pub fn quantize_f32(&mut self) {
        self.w = self.w.quantize_f32();
        self.b = self.b.quantize_f32();
    }
}

pub fn train_svm(
    x: &Matrix,
    y_idx: &[usize],
    k: usize,
    hyper: &Hyper,
    seed: u64,
) -> Result<SvmOvr> {
    let d = x.cols();
    let mut w = Matrix::zeros(d, k);
    let mut b = Matrix::zeros(1, k);
    let mut rng = Prng::seed_from_u64(derive_seed(seed, &[7]));
    let mut order: Vec<usize> = (0..x.rows()).collect();

    for epoch in 1..=hyper.svm_epochs {
        let lr = hyper.svm_lr / epoch as f64;
        rng.shuffle(&mut order);
        for &i in &order {
            let xi = x.row(i);
            for c in 0..k {
                let sign = if y_idx[i] == c { 1.0 } else { -1.0 };
                let mut margin = b.get(0, c);
                for (f, &xv) in xi.iter().enumerate() {
                    margin += w.get(f, c) * xv;
                }
                if sign * margin < 1.0 {
                    for (f, &xv) in xi.iter().enumerate() {
                        w.set(f, c, w.get(f, c) + lr * sign * xv);
                    }
                    b.set(0, c, b.get(0, c) + lr * sign);
                }
            }
        }
    }

    let mut model = SvmOvr { w, b };
    model.quantize_f32();
    Ok(model)
}

/// One hidden layer of ReLU units with a softmax head, full-batch Adam.
#[derive(Debug, Clone)]
pub struct MlpNet {
    pub w1: Matrix,
    pub b1: Matrix,
    pub w2: Matrix,
    pub b2: Matrix,
}

impl MlpNet {
    pub fn logits(&self, x: &Matrix) -> Result<Matrix> {
        let h = x.matmul(&self.w1)?.add(&self.b1)?.relu();
        Ok(h.matmul(&self.w2)?.add(&self.b2)?)
    }

    pub fn proba(&self, x: &Matrix) -> Result<Matrix> {
        Ok(softmax_rows(&self.logits(x)?))
    }

    pub fn quantize_f32(&mut self) {
        self.w1 = self.w1.quantize_f32();
        self.b1 = self.b1.quantize_f32();
        self.w2 = self.w2.quantize_f32();
        self.b2 = self.b2.quantize_f32();
    }
}

pub fn train_mlp(
    x: &Matrix,
    y_idx: &[usize],
    k: usize,
    hyper: &Hyper,
    seed: u64,
) -> Result<MlpNet> {
    let d = x.cols();
    let h = hyper.mlp_hidden;
    let mut rng = Prng::seed_from_u64(derive_seed(seed, &[8]));
    let mut params = vec![
        rng.normal_matrix(d, h, (2.0 / d as f64).sqrt()),
        Matrix::zeros(1, h),
        rng.normal_matrix(h, k, (1.0 / h as f64).sqrt()),
        Matrix::zeros(1, k),
    ];
    let mut adam = AdamState::for_params(hyper.lr, &params);
    let targets = one_hot(y_idx, k);
    let n = x.rows() as f64;

    for _ in 0..hyper.mlp_epochs {
        let mut g = Graph::new();
        let w1 = g.parameter(params[0].clone());
        let b1 = g.parameter(params[1].clone());
        let w2 = g.parameter(params[2].clone());
        let b2 = g.parameter(params[3].clone());
        let xs = g.constant(x.clone());
        let t = g.constant(targets.clone());
        let xw = g.matmul(xs, w1)?;
        let pre = g.add(xw, b1)?;
        let hid = g.relu(pre);
        let hw = g.matmul(hid, w2)?;
        let logits = g.add(hw, b2)?;
        let ls = g.log_softmax(logits);
        let picked = g.mul(t, ls)?;
        let ce_sum = g.sum(picked);
        let loss = g.scale(ce_sum, -1.0 / n);
        let grads = g.backward(loss)?;
        let grad_mats: Vec<Matrix> = grads.into_vec().into_iter().map(|(_, m)| m).collect();
        adam.step(&mut params, &grad_mats)?;
    }

    let mut model = MlpNet {
        w1: params.remove(0),
        b1: params.remove(0),
        w2: params.remove(0),
        b2: params.remove(0),
    };
    model.quantize_f32();
    Ok(model)
}
