//! Tree ensembles: bootstrapped random forest and extremely randomized
//! trees. Per-tree seeds are derived from the model seed, so training is
//! deterministic regardless of any outer scheduling, and prediction
//! aggregates integer votes, so it cannot depend on tree order.

use crate::error::Result;
use crate::tree::{SplitStyle, Tree, TreeBuilder};
use numcore::{derive_seed, Matrix, Prng};

#[derive(Debug, Clone)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    pub n_classes: usize,
}

pub fn fit_forest(
    x: &Matrix,
    y_idx: &[usize],
    n_classes: usize,
    n_trees: usize,
    bootstrap: bool,
    style: SplitStyle,
    seed: u64,
) -> ForestModel {
    let n = x.rows();
    let d = x.cols();
    let features_per_split = ((d as f64).sqrt().floor() as usize).max(1);

    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = Prng::seed_from_u64(derive_seed(seed, &[4, t as u64]));
            let rows: Vec<usize> = if bootstrap {
                (0..n).map(|_| rng.next_below(n as u64) as usize).collect()
            } else {
                (0..n).collect()
            };
            TreeBuilder {
                x,
                y_idx,
                n_classes,
                features_per_split,
                style,
                rng,
            }
            .build(rows)
        })
        .collect();

    ForestModel { trees, n_classes }
}

impl ForestModel {
    /// Per-class vote fractions.
    pub fn proba(&self, queries: &Matrix) -> Result<Matrix> {
        let mut out = Matrix::zeros(queries.rows(), self.n_classes);
        for q in 0..queries.rows() {
            let row = queries.row(q);
            let mut votes = vec![0usize; self.n_classes];
            for t in &self.trees {
                votes[t.predict_idx(row) as usize] += 1;
            }
            for c in 0..self.n_classes {
                out.set(q, c, votes[c] as f64 / self.trees.len() as f64);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> (Matrix, Vec<usize>) {
        let mut rng = Prng::seed_from_u64(3);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..60 {
            let cls = i % 2;
            let center = if cls == 0 { -2.0 } else { 2.0 };
            rows.push(vec![
                center + rng.next_normal() * 0.4,
                center + rng.next_normal() * 0.4,
            ]);
            y.push(cls);
        }
        (Matrix::from_rows(&rows).unwrap(), y)
    }

    #[test]
    fn single_tree_ensemble_equals_that_tree() {
        let (x, y) = blobs();
        let forest = fit_forest(&x, &y, 2, 1, true, SplitStyle::MidpointSearch, 5);
        let p = forest.proba(&x).unwrap();
        for q in 0..x.rows() {
            let direct = forest.trees[0].predict_idx(x.row(q));
            let via_votes = if p.get(q, 0) >= p.get(q, 1) { 0 } else { 1 };
            assert_eq!(direct as usize, via_votes);
        }
    }

    #[test]
    fn predictions_invariant_to_tree_order() {
        let (x, y) = blobs();
        let mut forest = fit_forest(&x, &y, 2, 15, false, SplitStyle::RandomThreshold, 6);
        let before = forest.proba(&x).unwrap();
        forest.trees.reverse();
        let after = forest.proba(&x).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn same_seed_same_forest() {
        let (x, y) = blobs();
        let a = fit_forest(&x, &y, 2, 10, true, SplitStyle::MidpointSearch, 9);
        let b = fit_forest(&x, &y, 2, 10, true, SplitStyle::MidpointSearch, 9);
        assert_eq!(a.trees, b.trees);
    }
}
