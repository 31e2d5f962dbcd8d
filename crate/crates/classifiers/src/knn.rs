//! k-nearest-neighbour with exact, documented tie rules: neighbour ties on
//! distance go to the lower training-row index, vote ties to the smaller
//! class label (lower class index).

use crate::error::Result;
use numcore::Matrix;

#[derive(Debug, Clone)]
pub struct KnnModel {
    pub x: Matrix,
    pub y_idx: Vec<u32>,
    pub k: usize,
    pub n_classes: usize,
}

impl KnnModel {
    pub fn fit(x: &Matrix, y_idx: &[usize], n_classes: usize, k: usize) -> KnnModel {
        KnnModel {
            x: x.quantize_f32(),
            y_idx: y_idx.iter().map(|&i| i as u32).collect(),
            k,
            n_classes,
        }
    }

    /// Vote fractions over the k nearest training rows.
    pub fn proba(&self, queries: &Matrix) -> Result<Matrix> {
        let n = self.x.rows();
        let k = self.k.min(n);
        let mut out = Matrix::zeros(queries.rows(), self.n_classes);
        for q in 0..queries.rows() {
            let qrow = queries.row(q);
            let mut dists: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let d2: f64 = self
                        .x
                        .row(i)
                        .iter()
                        .zip(qrow)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    (d2, i)
                })
                .collect();
            dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut votes = vec![0usize; self.n_classes];
            for &(_, i) in dists.iter().take(k) {
                votes[self.y_idx[i] as usize] += 1;
            }
            for c in 0..self.n_classes {
                out.set(q, c, votes[c] as f64 / k as f64);
            }
        }
        Ok(out)
    }
}
