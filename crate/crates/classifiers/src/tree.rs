//! Single decision tree with Gini splits and deterministic tie-breaking:
//! the best split is the lexicographic minimum of (weighted gini, feature
//! index, threshold). Thresholds are stored f32-rounded, matching the
//! on-disk precision.

use numcore::{Matrix, Prng};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        label: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn predict_idx(&self, row: &[f64]) -> u32 {
        let mut cur = 0usize;
        loop {
            match &self.nodes[cur] {
                TreeNode::Leaf { label } => return *label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    cur = if row[*feature as usize] < *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStyle {
    /// Evaluate midpoints between consecutive distinct values (random forest).
    MidpointSearch,
    /// One uniform threshold draw per candidate feature (extra trees).
    RandomThreshold,
}

pub struct TreeBuilder<'a> {
    pub x: &'a Matrix,
    pub y_idx: &'a [usize],
    pub n_classes: usize,
    pub features_per_split: usize,
    pub style: SplitStyle,
    pub rng: Prng,
}

struct Candidate {
    gini: f64,
    feature: usize,
    threshold: f64,
}

impl<'a> TreeBuilder<'a> {
    pub fn build(mut self, rows: Vec<usize>) -> Tree {
        let mut nodes = Vec::new();
        self.grow(rows, &mut nodes);
        Tree { nodes }
    }

    fn grow(&mut self, rows: Vec<usize>, nodes: &mut Vec<TreeNode>) -> u32 {
        let counts = self.class_counts(&rows);
        let id = nodes.len() as u32;

        if counts.iter().filter(|&&c| c > 0).count() <= 1 {
            nodes.push(TreeNode::Leaf {
                label: majority(&counts),
            });
            return id;
        }

        let d = self.x.cols();
        let mut feats = self.rng.sample_indices(d, self.features_per_split);
        feats.sort_unstable();

        let mut best: Option<Candidate> = None;
        for f in feats {
            let cands = match self.style {
                SplitStyle::MidpointSearch => self.midpoint_candidates(&rows, f),
                SplitStyle::RandomThreshold => self.random_candidate(&rows, f),
            };
            for c in cands {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        c.gini < b.gini
                            || (c.gini == b.gini
                                && (c.feature, c.threshold) < (b.feature, b.threshold))
                    }
                };
                if better {
                    best = Some(c);
                }
            }
        }

        let Some(split) = best else {
            nodes.push(TreeNode::Leaf {
                label: majority(&counts),
            });
            return id;
        };

        let (mut left_rows, mut right_rows) = (Vec::new(), Vec::new());
        for &r in &rows {
            if self.x.get(r, split.feature) < split.threshold {
                left_rows.push(r);
            } else {
                right_rows.push(r);
            }
        }
        debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());

        nodes.push(TreeNode::Leaf { label: 0 }); // placeholder
        let left = self.grow(left_rows, nodes);
        let right = self.grow(right_rows, nodes);
        nodes[id as usize] = TreeNode::Split {
            feature: split.feature as u32,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }

    fn class_counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &r in rows {
            counts[self.y_idx[r]] += 1;
        }
        counts
    }

    fn midpoint_candidates(&self, rows: &[usize], f: usize) -> Vec<Candidate> {
        let mut vals: Vec<(f64, usize)> = rows
            .iter()
            .map(|&r| (self.x.get(r, f), self.y_idx[r]))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let n = vals.len();
        let total = self.class_counts(rows);
        let total_n = n as f64;

        let mut left = vec![0usize; self.n_classes];
        let mut out = Vec::new();
        for i in 0..n - 1 {
            left[vals[i].1] += 1;
            if vals[i].0 == vals[i + 1].0 {
                continue;
            }
            let threshold = (vals[i].0 + vals[i + 1].0) / 2.0;
            let threshold = threshold as f32 as f64;
            // the f32 rounding must keep the boundary between the two values
            if !(vals[i].0 < threshold && threshold <= vals[i + 1].0) {
                continue;
            }
            let nl = (i + 1) as f64;
            let nr = total_n - nl;
            let gl = gini_from(&left, nl);
            let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let gr = gini_from(&right, nr);
            out.push(Candidate {
                gini: (nl * gl + nr * gr) / total_n,
                feature: f,
                threshold,
            });
        }
        out
    }

    fn random_candidate(&mut self, rows: &[usize], f: usize) -> Vec<Candidate> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &r in rows {
            let v = self.x.get(r, f);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo == hi {
            return Vec::new();
        }
        let t = lo + self.rng.next_f64() * (hi - lo);
        let t = t as f32 as f64;
        let mut left = vec![0usize; self.n_classes];
        let mut nl = 0usize;
        for &r in rows {
            if self.x.get(r, f) < t {
                left[self.y_idx[r]] += 1;
                nl += 1;
            }
        }
        if nl == 0 || nl == rows.len() {
            return Vec::new();
        }
        let total = self.class_counts(rows);
        let right: Vec<usize> = total.iter().zip(&left).map(|(a, b)| a - b).collect();
        let n = rows.len() as f64;
        let nl_f = nl as f64;
        let nr_f = n - nl_f;
        Vec::from([Candidate {
            gini: (nl_f * gini_from(&left, nl_f) + nr_f * gini_from(&right, nr_f)) / n,
            feature: f,
            threshold: t,
        }])
    }
}

fn gini_from(counts: &[usize], n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    let mut g = 1.0;
    for &c in counts {
        let p = c as f64 / n;
        g -= p * p;
    }
    g
}

/// Majority class index; ties go to the smallest index.
pub fn majority(counts: &[usize]) -> u32 {
    let mut best = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best as u32
}
