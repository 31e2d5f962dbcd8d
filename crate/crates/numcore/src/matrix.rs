//! Dense row-major `f64` matrix with the small op set the engine needs.
//!
//! Binary elementwise ops accept either equal shapes or a 1xN right-hand
//! side, which is broadcast across rows (the bias case).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Contract(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Contract("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Contract(format!(
                    "ragged rows: expected {} columns, found {}",
                    cols,
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Stack a set of equal-width rows taken from `self` into a new matrix.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dim("matmul", self.shape(), other.shape()));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        // ikj loop order: row-major friendly, fixed accumulation order per row.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for j in 0..other.cols {
                    orow[j] += a * brow[j];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    fn zip(&self, other: &Matrix, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() == other.shape() {
            let data = self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect();
            Ok(Matrix {
                rows: self.rows,
                cols: self.cols,
                data,
            })
        } else if other.rows == 1 && other.cols == self.cols {
            // row-broadcast of a 1xN rhs
            let mut out = self.clone();
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let i = r * self.cols + c;
                    out.data[i] = f(self.data[i], other.data[c]);
                }
            }
            Ok(out)
        } else {
            Err(Error::dim(op, self.shape(), other.shape()))
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "sub", |a, b| a - b)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "mul", |a, b| a * b)
    }

    pub fn div(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "div", |a, b| a / b)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn relu(&self) -> Matrix {
        self.map(|x| if x > 0.0 { x } else { 0.0 })
    }

    pub fn tanh(&self) -> Matrix {
        self.map(f64::tanh)
    }

    pub fn sigmoid(&self) -> Matrix {
        self.map(sigmoid)
    }

    pub fn softplus(&self) -> Matrix {
        self.map(softplus)
    }

    pub fn exp(&self) -> Matrix {
        self.map(f64::exp)
    }

    /// Natural log. Non-positive entries are a domain error, never clamped.
    pub fn ln(&self) -> Result<Matrix> {
        for &x in &self.data {
            if x <= 0.0 {
                return Err(Error::Domain { op: "log", value: x });
            }
        }
        Ok(self.map(f64::ln))
    }

    pub fn sqrt(&self) -> Result<Matrix> {
        for &x in &self.data {
            if x < 0.0 {
                return Err(Error::Domain { op: "sqrt", value: x });
            }
        }
        Ok(self.map(f64::sqrt))
    }

    pub fn scale(&self, c: f64) -> Matrix {
        self.map(|x| c * x)
    }

    pub fn add_scalar(&self, c: f64) -> Matrix {
        self.map(|x| x + c)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Row sums as an Mx1 column.
    pub fn sum_rows(&self) -> Matrix {
        let mut out = Matrix::zeros(self.rows, 1);
        for r in 0..self.rows {
            out.data[r] = self.row(r).iter().sum();
        }
        out
    }

    /// Column sums as a 1xN row (the broadcast adjoint).
    pub fn sum_cols(&self) -> Matrix {
        let mut out = Matrix::zeros(1, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c] += self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn mean(&self) -> f64 {
        self.sum() / (self.rows * self.cols) as f64
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn assert_finite(&self, context: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite {
                context: context.to_string(),
            })
        }
    }

    /// Round every entry through f32, the on-disk precision.
    pub fn quantize_f32(&self) -> Matrix {
        self.map(|x| x as f32 as f64)
    }

    pub fn concat_rows(blocks: &[Matrix]) -> Result<Matrix> {
        if blocks.is_empty() {
            return Err(Error::Contract("concat_rows on empty list".into()));
        }
        let cols = blocks[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::dim("concat_rows", (blocks[0].rows, cols), b.shape()));
            }
            rows += b.rows;
            data.extend_from_slice(&b.data);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Horizontal concatenation (same row counts).
    pub fn concat_cols(blocks: &[Matrix]) -> Result<Matrix> {
        if blocks.is_empty() {
            return Err(Error::Contract("concat_cols on empty list".into()));
        }
        let rows = blocks[0].rows;
        let total_cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, total_cols);
        for b in blocks {
            if b.rows != rows {
                return Err(Error::dim("concat_cols", blocks[0].shape(), b.shape()));
            }
        }
        for r in 0..rows {
            let mut c0 = 0;
            for b in blocks {
                out.data[r * total_cols + c0..r * total_cols + c0 + b.cols]
                    .copy_from_slice(b.row(r));
                c0 += b.cols;
            }
        }
        Ok(out)
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable ln(1 + e^x).
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Elementwise op kinds exposed as a single dispatch entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemKind {
    Add,
    Sub,
    Mul,
    Relu,
    Tanh,
    Sigmoid,
    Exp,
    Log,
}

impl ElemKind {
    pub fn is_binary(self) -> bool {
        matches!(self, ElemKind::Add | ElemKind::Sub | ElemKind::Mul)
    }
}

pub fn elementwise(kind: ElemKind, inputs: &[&Matrix]) -> Result<Matrix> {
    let arity = if kind.is_binary() { 2 } else { 1 };
    if inputs.len() != arity {
        return Err(Error::Contract(format!(
            "{kind:?} expects {arity} inputs, got {}",
            inputs.len()
        )));
    }
    match kind {
        ElemKind::Add => inputs[0].add(inputs[1]),
        ElemKind::Sub => inputs[0].sub(inputs[1]),
        ElemKind::Mul => inputs[0].mul(inputs[1]),
        ElemKind::Relu => Ok(inputs[0].relu()),
        ElemKind::Tanh => Ok(inputs[0].tanh()),
        ElemKind::Sigmoid => Ok(inputs[0].sigmoid()),
        ElemKind::Exp => Ok(inputs[0].exp()),
        ElemKind::Log => inputs[0].ln(),
    }
}
