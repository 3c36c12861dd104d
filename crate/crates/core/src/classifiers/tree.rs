//! Binary CART trees shared by the tree, forest and boosting models.
//!
//! Splits are axis-aligned at midpoints between consecutive distinct values,
//! rows with `x <= threshold` going left. Candidate features are scanned in
//! ascending index order and thresholds in ascending order; only a strictly
//! better score replaces the incumbent, so ties go to the first feature and
//! the lowest threshold.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split { feature, threshold, left, right } => {
                    i = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    /// `None` grows until nodes are pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features drawn per split; `None` considers all of them.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Criterion {
    /// Weighted Gini impurity on 0/1 targets.
    Gini,
    /// Weighted sum of squared deviations.
    Variance,
}

#[derive(Clone, Copy, Default)]
struct Stats {
    w: f64,
    wt: f64,
    wtt: f64,
}

impl Stats {
    fn add(&mut self, w: f64, t: f64) {
        self.w += w;
        self.wt += w * t;
        self.wtt += w * t * t;
    }

    fn sub(self, o: Stats) -> Stats {
        Stats { w: self.w - o.w, wt: self.wt - o.wt, wtt: self.wtt - o.wtt }
    }

    // Node impurity scaled by node weight, so children can simply be summed.
    fn impurity(self, c: Criterion) -> f64 {
        if self.w <= 0.0 {
            return 0.0;
        }
        match c {
            // W * (1 - p1^2 - p0^2) = 2 * W1 * W0 / W
            Criterion::Gini => 2.0 * self.wt * (self.w - self.wt) / self.w,
            Criterion::Variance => (self.wtt - self.wt * self.wt / self.w).max(0.0),
        }
    }
}

pub(crate) struct Grower<'a> {
    pub x: &'a Matrix,
    pub target: &'a [f64],
    pub weight: &'a [f64],
    pub criterion: Criterion,
    pub params: TreeParams,
}

impl Grower<'_> {
    /// Grows a tree over `indices` (duplicates allowed, as in a bootstrap
    /// sample). `leaf_value` turns the rows reaching a leaf into its output.
    pub fn grow(
        &self,
        indices: Vec<usize>,
        leaf_value: &dyn Fn(&[usize]) -> f64,
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Tree {
        let mut nodes = Vec::new();
        self.build(indices, 0, &mut nodes, leaf_value, &mut rng);
        Tree { nodes }
    }

    fn build(
        &self,
        indices: Vec<usize>,
        depth: usize,
        nodes: &mut Vec<Node>,
        leaf_value: &dyn Fn(&[usize]) -> f64,
        rng: &mut Option<&mut ChaCha8Rng>,
    ) -> usize {
        let id = nodes.len();
        nodes.push(Node::Leaf { value: leaf_value(&indices) });
        let at_limit = self.params.max_depth.is_some_and(|d| depth >= d);
        if at_limit || indices.len() < self.params.min_samples_split || self.is_pure(&indices) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&indices, rng) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            indices.into_iter().partition(|&i| self.x.get(i, feature) <= threshold);
        let left = self.build(l, depth + 1, nodes, leaf_value, rng);
        let right = self.build(r, depth + 1, nodes, leaf_value, rng);
        nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }

    fn is_pure(&self, indices: &[usize]) -> bool {
        let t0 = self.target[indices[0]];
        indices.iter().all(|&i| self.target[i] == t0)
    }

    fn best_split(
        &self,
        indices: &[usize],
        rng: &mut Option<&mut ChaCha8Rng>,
    ) -> Option<(usize, f64)> {
        let d = self.x.cols();
        let features: Vec<usize> = match (self.params.max_features, rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < d => {
                let mut f = sample(rng, d, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..d).collect(),
        };
        let mut total = Stats::default();
        for &i in indices {
            total.add(self.weight[i], self.target[i]);
        }
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = f64::INFINITY;
        let mut order = indices.to_vec();
        for f in features {
            order.sort_by(|&a, &b| self.x.get(a, f).total_cmp(&self.x.get(b, f)));
            let mut left = Stats::default();
            for k in 0..order.len() - 1 {
                let i = order[k];
                left.add(self.weight[i], self.target[i]);
                let (a, b) = (self.x.get(i, f), self.x.get(order[k + 1], f));
                if a == b {
                    continue;
                }
                let score = left.impurity(self.criterion) + total.sub(left).impurity(self.criterion);
                if score < best_score {
                    best_score = score;
                    let mid = a + (b - a) / 2.0;
                    best = Some((f, if mid < b { mid } else { a }));
                }
            }
        }
        best
    }
}

/// Weighted fraction of class 1 among the rows.
pub(crate) fn class_fraction(target: &[f64], weight: &[f64], indices: &[usize]) -> f64 {
    let (mut w, mut w1) = (0.0, 0.0);
    for &i in indices {
        w += weight[i];
        w1 += weight[i] * target[i];
    }
    if w > 0.0 {
        w1 / w
    } else {
        0.5
    }
}

/// Gini classification tree whose leaves hold the class-1 fraction.
pub fn fit_classifier(x: &Matrix, y: &[u8], params: &TreeParams) -> Tree {
    let target: Vec<f64> = y.iter().map(|&l| l as f64).collect();
    let weight = vec![1.0; y.len()];
    fit_weighted(x, &target, &weight, params)
}

pub(crate) fn fit_weighted(x: &Matrix, target: &[f64], weight: &[f64], params: &TreeParams) -> Tree {
    let grower = Grower { x, target, weight, criterion: Criterion::Gini, params: *params };
    grower.grow(
        (0..target.len()).collect(),
        &|idx| class_fraction(target, weight, idx),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Matrix, Vec<u8>) {
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
        (x, vec![0, 1, 1, 0])
    }

    fn accuracy(t: &Tree, x: &Matrix, y: &[u8]) -> f64 {
        let hits = x
            .iter_rows()
            .zip(y)
            .filter(|(r, &l)| u8::from(t.predict_row(r) >= 0.5) == l)
            .count();
        hits as f64 / y.len() as f64
    }

    #[test]
    fn xor_needs_depth_two() {
        let (x, y) = xor();
        let p = |d| TreeParams { max_depth: Some(d), min_samples_split: 2, max_features: None };
        assert_eq!(accuracy(&fit_classifier(&x, &y, &p(2)), &x, &y), 1.0);
        assert!(accuracy(&fit_classifier(&x, &y, &p(1)), &x, &y) <= 0.75);
    }

    #[test]
    fn first_feature_wins_ties() {
        let (x, y) = xor();
        let t = fit_classifier(&x, &y, &TreeParams { max_depth: Some(1), min_samples_split: 2, max_features: None });
        assert_eq!(t.nodes()[0], Node::Split { feature: 0, threshold: 0.5, left: 1, right: 2 });
    }

    #[test]
    fn pure_node_is_a_leaf() {
        let x = Matrix::column_vector(&[1.0, 2.0, 3.0]);
        let t = fit_classifier(&x, &[1, 1, 1], &TreeParams { max_depth: None, min_samples_split: 2, max_features: None });
        assert_eq!(t.nodes(), &[Node::Leaf { value: 1.0 }]);
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn midpoint_never_reaches_upper_value() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let x = Matrix::column_vector(&[a, b]);
        let t = fit_classifier(&x, &[0, 1], &TreeParams { max_depth: None, min_samples_split: 2, max_features: None });
        assert_eq!(t.predict_row(&[a]), 0.0);
        assert_eq!(t.predict_row(&[b]), 1.0);
    }
}
