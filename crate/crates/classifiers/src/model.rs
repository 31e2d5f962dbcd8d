//! Unified classifier interface: training dispatch, prediction, and the
//! classifier file format.
//!
//! File layout: magic "MVCL", format version u16, kind byte, sorted class
//! labels, feature dim, then kind-specific parameter blocks with
//! little-endian f32 floats. All learned floats are f32-rounded in memory,
//! so save/load round trips are bit-exact.

use crate::error::{Error, Result};
use crate::forest::{fit_forest, ForestModel};
use crate::knn::KnnModel;
use crate::linear::{train_logreg, train_mlp, train_svm, LinearSoftmax, MlpNet, SvmOvr};
use crate::naive_bayes::NbModel;
use crate::tree::{SplitStyle, Tree, TreeNode};
use crate::Hyper;
use numcore::Matrix;
use std::path::Path;

const MAGIC: &[u8; 4] = b"MVCL";
const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierKind {
    LogReg,
    Svm,
    RandomForest,
    NaiveBayes,
    Mlp,
    ExtraTrees,
    Knn,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 7] = [
        ClassifierKind::LogReg,
        ClassifierKind::Svm,
        ClassifierKind::RandomForest,
        ClassifierKind::NaiveBayes,
        ClassifierKind::Mlp,
        ClassifierKind::ExtraTrees,
        ClassifierKind::Knn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::LogReg => "logreg",
            ClassifierKind::Svm => "svm",
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::NaiveBayes => "naive_bayes",
            ClassifierKind::Mlp => "mlp",
            ClassifierKind::ExtraTrees => "extra_trees",
            ClassifierKind::Knn => "knn",
        }
    }

    pub fn from_name(name: &str) -> Option<ClassifierKind> {
        ClassifierKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn code(self) -> u8 {
        match self {
            ClassifierKind::LogReg => 0,
            ClassifierKind::Svm => 1,
            ClassifierKind::RandomForest => 2,
            ClassifierKind::NaiveBayes => 3,
            ClassifierKind::Mlp => 4,
            ClassifierKind::ExtraTrees => 5,
            ClassifierKind::Knn => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<ClassifierKind> {
        ClassifierKind::ALL.into_iter().find(|k| k.code() == code)
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
enum Inner {
    LogReg(LinearSoftmax),
    Svm(SvmOvr),
    RandomForest(ForestModel),
    NaiveBayes(NbModel),
    Mlp(MlpNet),
    ExtraTrees(ForestModel),
    Knn(KnnModel),
}

#[derive(Debug, Clone)]
pub struct ClassifierModel {
    pub kind: ClassifierKind,
    /// Sorted ascending; class index = position in this list.
    pub labels: Vec<i64>,
    pub feature_dim: usize,
    inner: Inner,
}

/// Map raw labels to dense class indices against the sorted label list.
fn to_indices(y: &[i64], labels: &[i64]) -> Vec<usize> {
    y.iter()
        .map(|v| labels.binary_search(v).expect("label present"))
        .collect()
}

pub fn train_classifier(
    x: &Matrix,
    y: &[i64],
    kind: ClassifierKind,
    hyper: &Hyper,
    seed: u64,
) -> Result<ClassifierModel> {
    if x.rows() == 0 || y.is_empty() {
        return Err(Error::Contract("train_classifier on empty data".into()));
    }
    if x.rows() != y.len() {
        return Err(Error::Contract(format!(
            "feature rows ({}) and label count ({}) differ",
            x.rows(),
            y.len()
        )));
    }
    if !x.is_finite() {
        return Err(Error::Integrity(
            "training features contain non-finite values".into(),
        ));
    }

    let mut labels: Vec<i64> = y.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let y_idx = to_indices(y, &labels);
    let k = labels.len();

    let inner = match kind {
        ClassifierKind::LogReg => Inner::LogReg(train_logreg(x, &y_idx, k, hyper)?),
        ClassifierKind::Svm => Inner::Svm(train_svm(x, &y_idx, k, hyper, seed)?),
        ClassifierKind::Mlp => Inner::Mlp(train_mlp(x, &y_idx, k, hyper, seed)?),
        ClassifierKind::Knn => Inner::Knn(KnnModel::fit(x, &y_idx, k, hyper.knn_k)),
        ClassifierKind::NaiveBayes => {
            Inner::NaiveBayes(NbModel::fit(x, &y_idx, k, hyper.nb_smoothing))
        }
        ClassifierKind::RandomForest => Inner::RandomForest(fit_forest(
            x,
            &y_idx,
            k,
            hyper.trees,
            true,
            SplitStyle::MidpointSearch,
            seed,
        )),
        ClassifierKind::ExtraTrees => Inner::ExtraTrees(fit_forest(
            x,
            &y_idx,
            k,
            hyper.trees,
            false,
            SplitStyle::RandomThreshold,
            seed,
        )),
    };

    Ok(ClassifierModel {
        kind,
        labels,
        feature_dim: x.cols(),
        inner,
    })
}

impl ClassifierModel {
    fn check_dim(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.feature_dim {
            return Err(Error::FeatureDim {
                expected: self.feature_dim,
                got: x.cols(),
            });
        }
        Ok(())
    }

    /// Per-class scores; every row sums to one.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Matrix> {
        self.check_dim(x)?;
        match &self.inner {
            Inner::LogReg(m) => m.proba(x),
            Inner::Svm(m) => m.proba(x),
            Inner::Mlp(m) => m.proba(x),
            Inner::Knn(m) => m.proba(x),
            Inner::NaiveBayes(m) => m.proba(x),
            Inner::RandomForest(m) | Inner::ExtraTrees(m) => m.proba(x),
        }
    }

    /// argmax of `predict_proba`; score ties go to the smaller class label.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<i64>> {
        let proba = self.predict_proba(x)?;
        Ok((0..proba.rows())
            .map(|r| {
                let row = proba.row(r);
                let mut best = 0usize;
                for (c, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = c;
                    }
                }
                self.labels[best]
            })
            .collect())
    }

    // --- serialization ---------------------------------------------------

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = MAGIC.to_vec();
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.push(self.kind.code());
        b.extend_from_slice(&(self.labels.len() as u16).to_le_bytes());
        for &l in &self.labels {
            b.extend_from_slice(&l.to_le_bytes());
        }
        b.extend_from_slice(&(self.feature_dim as u32).to_le_bytes());
        match &self.inner {
            Inner::LogReg(m) => {
                put_matrix(&mut b, &m.w);
                put_matrix(&mut b, &m.b);
            }
            Inner::Svm(m) => {
                put_matrix(&mut b, &m.w);
                put_matrix(&mut b, &m.b);
            }
            Inner::Mlp(m) => {
                put_matrix(&mut b, &m.w1);
                put_matrix(&mut b, &m.b1);
                put_matrix(&mut b, &m.w2);
                put_matrix(&mut b, &m.b2);
            }
            Inner::Knn(m) => {
                b.extend_from_slice(&(m.k as u32).to_le_bytes());
                put_matrix(&mut b, &m.x);
                b.extend_from_slice(&(m.y_idx.len() as u32).to_le_bytes());
                for &yi in &m.y_idx {
                    b.extend_from_slice(&yi.to_le_bytes());
                }
            }
            Inner::NaiveBayes(m) => {
                for &p in &m.priors {
                    b.extend_from_slice(&(p as f32).to_le_bytes());
                }
                put_matrix(&mut b, &m.means);
                put_matrix(&mut b, &m.vars);
            }
            Inner::RandomForest(m) | Inner::ExtraTrees(m) => {
                b.extend_from_slice(&(m.trees.len() as u32).to_le_bytes());
                for t in &m.trees {
                    b.extend_from_slice(&(t.nodes.len() as u32).to_le_bytes());
                    for n in &t.nodes {
                        match n {
                            TreeNode::Split {
                                feature,
                                threshold,
                                left,
                                right,
                            } => {
                                b.push(0);
                                b.extend_from_slice(&feature.to_le_bytes());
                                b.extend_from_slice(&(*threshold as f32).to_le_bytes());
                                b.extend_from_slice(&left.to_le_bytes());
                                b.extend_from_slice(&right.to_le_bytes());
                            }
                            TreeNode::Leaf { label } => {
                                b.push(1);
                                b.extend_from_slice(&label.to_le_bytes());
                            }
                        }
                    }
                }
            }
        }
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<ClassifierModel> {
        let mut r = ByteReader { buf: bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic, not a classifier file".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version}, expected {VERSION}"
            )));
        }
        let kind_code = r.take(1)?[0];
        let kind = ClassifierKind::from_code(kind_code)
            .ok_or_else(|| Error::Format(format!("classifier kind byte {kind_code} invalid")))?;
        let n_labels = r.u16()? as usize;
        let mut labels = Vec::with_capacity(n_labels);
        for _ in 0..n_labels {
            labels.push(i64::from_le_bytes(r.take(8)?.try_into().unwrap()));
        }
        let feature_dim = r.u32()? as usize;
        let k = labels.len();

        let inner = match kind {
            ClassifierKind::LogReg => Inner::LogReg(LinearSoftmax {
                w: r.matrix()?,
                b: r.matrix()?,
            }),
            ClassifierKind::Svm => Inner::Svm(SvmOvr {
                w: r.matrix()?,
                b: r.matrix()?,
            }),
            ClassifierKind::Mlp => Inner::Mlp(MlpNet {
                w1: r.matrix()?,
                b1: r.matrix()?,
                w2: r.matrix()?,
                b2: r.matrix()?,
            }),
            ClassifierKind::Knn => {
                let kk = r.u32()? as usize;
                let x = r.matrix()?;
                let n = r.u32()? as usize;
                let mut y_idx = Vec::with_capacity(n);
                for _ in 0..n {
                    y_idx.push(r.u32()?);
                }
                Inner::Knn(KnnModel {
                    x,
                    y_idx,
                    k: kk,
                    n_classes: k,
                })
            }
            ClassifierKind::NaiveBayes => {
                let mut priors = Vec::with_capacity(k);
                for _ in 0..k {
                    priors.push(r.f32()? as f64);
                }
                Inner::NaiveBayes(NbModel {
                    priors,
                    means: r.matrix()?,
                    vars: r.matrix()?,
                    n_classes: k,
                })
            }
            ClassifierKind::RandomForest | ClassifierKind::ExtraTrees => {
                let n_trees = r.u32()? as usize;
                let mut trees = Vec::with_capacity(n_trees);
                for _ in 0..n_trees {
                    let n_nodes = r.u32()? as usize;
                    let mut nodes = Vec::with_capacity(n_nodes);
                    for _ in 0..n_nodes {
                        let tag = r.take(1)?[0];
                        nodes.push(match tag {
                            0 => TreeNode::Split {
                                feature: r.u32()?,
                                threshold: r.f32()? as f64,
                                left: r.u32()?,
                                right: r.u32()?,
                            },
                            1 => TreeNode::Leaf { label: r.u32()? },
                            other => {
                                return Err(Error::Format(format!("bad tree node tag {other}")))
                            }
                        });
                    }
                    trees.push(Tree { nodes });
                }
                let forest = ForestModel {
                    trees,
                    n_classes: k,
                };
                if kind == ClassifierKind::RandomForest {
                    Inner::RandomForest(forest)
                } else {
                    Inner::ExtraTrees(forest)
                }
            }
        };
        r.done()?;

        Ok(ClassifierModel {
            kind,
            labels,
            feature_dim,
            inner,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<ClassifierModel> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        ClassifierModel::from_bytes(&bytes)
    }
}

fn put_matrix(b: &mut Vec<u8>, m: &Matrix) {
    b.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    b.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for &v in m.data() {
        b.extend_from_slice(&(v as f32).to_le_bytes());
    }
}

struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format(format!(
                "truncated file at offset {}",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn matrix(&mut self) -> Result<Matrix> {
        let rows = self.u32()? as usize;
        let cols = self.u32()? as usize;
        if rows.checked_mul(cols).map_or(true, |n| n > 1 << 28) {
            return Err(Error::Format(format!(
                "implausible matrix shape {rows}x{cols}"
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(self.f32()? as f64);
        }
        Matrix::from_vec(rows, cols, data).map_err(|e| Error::Format(e.to_string()))
    }
    fn done(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after classifier data",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}
