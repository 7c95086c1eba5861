//! CART tree builder shared by the decision tree, random forest, and
//! gradient boosting models.
//!
//! Split search keeps one index list per feature, pre-sorted by that
//! feature's value and partitioned on the way down, so each node costs
//! O(features x samples) instead of re-sorting. Thresholds are actual data
//! values with a `x <= threshold` test. Ties in gain resolve to the lowest
//! feature index and then the lowest threshold, which together with fixed
//! iteration order makes construction fully deterministic.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Split quality criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Criterion {
    /// Gini impurity on 0/1 targets.
    Gini,
    /// Variance (sum of squared errors) reduction on real targets.
    Mse,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TreeOptions {
    /// 0 means unlimited depth.
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub criterion: Criterion,
    /// Features considered per split; `None` uses all of them.
    pub features_per_split: Option<usize>,
}

/// One node of a built tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A fitted tree: nodes in an arena, root at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, features: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if features[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

/// Build a tree over `samples` (row indices into `rows`). `leaf_value` maps a
/// leaf's sample set to its prediction. `rng` drives per-split feature
/// subsampling when `features_per_split` is set.
pub(crate) fn build_tree(
    rows: &[Vec<f64>],
    targets: &[f64],
    samples: Vec<usize>,
    opts: &TreeOptions,
    rng: &mut ChaCha8Rng,
    leaf_value: &mut dyn FnMut(&[usize]) -> f64,
) -> Tree {
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    // Per-feature index lists sorted by value (index as tiebreak).
    let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(dim);
    for f in 0..dim {
        let mut order = samples.clone();
        order.sort_by(|a, b| {
            rows[*a][f]
                .total_cmp(&rows[*b][f])
                .then_with(|| a.cmp(b))
        });
        sorted.push(order);
    }
    let mut nodes = Vec::new();
    grow(rows, targets, samples, sorted, 0, opts, rng, leaf_value, &mut nodes);
    Tree { nodes }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

#[allow(clippy::too_many_arguments)]
fn grow(
    rows: &[Vec<f64>],
    targets: &[f64],
    samples: Vec<usize>,
    sorted: Vec<Vec<usize>>,
    depth: usize,
    opts: &TreeOptions,
    rng: &mut ChaCha8Rng,
    leaf_value: &mut dyn FnMut(&[usize]) -> f64,
    nodes: &mut Vec<Node>,
) -> usize {
    let n = samples.len();
    let depth_reached = opts.max_depth != 0 && depth >= opts.max_depth;
    if sorted.is_empty()
        || n < 2 * opts.min_samples_leaf
        || depth_reached
        || is_constant(targets, &samples)
    {
        let id = nodes.len();
        nodes.push(Node::Leaf {
            value: leaf_value(&samples),
        });
        return id;
    }

    let candidate_features: Vec<usize> = match opts.features_per_split {
        Some(k) if k < sorted.len() => {
            let mut picked = rand::seq::index::sample(rng, sorted.len(), k).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..sorted.len()).collect(),
    };

    let mut best: Option<BestSplit> = None;
    for &f in &candidate_features {
        if let Some(split) = best_split_on(rows, targets, &sorted[f], f, opts) {
            let better = match &best {
                None => true,
                Some(b) => split.gain > b.gain,
            };
            if better {
                best = Some(split);
            }
        }
    }

    let Some(best) = best else {
        let id = nodes.len();
        nodes.push(Node::Leaf {
            value: leaf_value(&samples),
        });
        return id;
    };

    // Partition every feature list by the chosen split, preserving order.
    let goes_left = |i: usize| rows[i][best.feature] <= best.threshold;
    let mut left_sorted = Vec::with_capacity(sorted.len());
    let mut right_sorted = Vec::with_capacity(sorted.len());
    for list in &sorted {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &i in list {
            if goes_left(i) {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        left_sorted.push(left);
        right_sorted.push(right);
    }
    drop(sorted);
    let mut left_samples = Vec::new();
    let mut right_samples = Vec::new();
    for i in samples {
        if goes_left(i) {
            left_samples.push(i);
        } else {
            right_samples.push(i);
        }
    }

    let id = nodes.len();
    nodes.push(Node::Leaf { value: 0.0 }); // placeholder, replaced below
    let left = grow(
        rows,
        targets,
        left_samples,
        left_sorted,
        depth + 1,
        opts,
        rng,
        leaf_value,
        nodes,
    );
    let right = grow(
        rows,
        targets,
        right_samples,
        right_sorted,
        depth + 1,
        opts,
        rng,
        leaf_value,
        nodes,
    );
    nodes[id] = Node::Split {
        feature: best.feature,
        threshold: best.threshold,
        left,
        right,
    };
    id
}

fn is_constant(targets: &[f64], samples: &[usize]) -> bool {
    let Some((&first, rest)) = samples.split_first() else {
        return true;
    };
    rest.iter().all(|&i| targets[i] == targets[first])
}

/// Best split of one feature's sorted list, if any.
fn best_split_on(
    rows: &[Vec<f64>],
    targets: &[f64],
    order: &[usize],
    feature: usize,
    opts: &TreeOptions,
) -> Option<BestSplit> {
    let n = order.len();
    let total: Stats = order.iter().fold(Stats::default(), |acc, &i| acc.add(targets[i]));
    let parent_impurity = total.impurity(opts.criterion);

    let mut left = Stats::default();
    let mut best: Option<BestSplit> = None;
    for pos in 0..n - 1 {
        left = left.add(targets[order[pos]]);
        let value = rows[order[pos]][feature];
        let next = rows[order[pos + 1]][feature];
        if value == next {
            continue; // cannot split between equal values
        }
        let left_n = pos + 1;
        let right_n = n - left_n;
        if left_n < opts.min_samples_leaf || right_n < opts.min_samples_leaf {
            continue;
        }
        let right = total.minus(&left);
        let weighted = (left_n as f64 * left.impurity(opts.criterion)
            + right_n as f64 * right.impurity(opts.criterion))
            / n as f64;
        let gain = parent_impurity - weighted;
        if gain > 1e-12 {
            let better = match &best {
                None => true,
                Some(b) => gain > b.gain,
            };
            if better {
                best = Some(BestSplit {
                    feature,
                    threshold: value,
                    gain,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    n: f64,
    sum: f64,
    sum_sq: f64,
}

impl Stats {
    fn add(mut self, target: f64) -> Stats {
        self.n += 1.0;
        self.sum += target;
        self.sum_sq += target * target;
        self
    }

    fn minus(&self, other: &Stats) -> Stats {
        Stats {
            n: self.n - other.n,
            sum: self.sum - other.sum,
            sum_sq: self.sum_sq - other.sum_sq,
        }
    }

    fn impurity(&self, criterion: Criterion) -> f64 {
        if self.n == 0.0 {
            return 0.0;
        }
        match criterion {
            Criterion::Gini => {
                let p = self.sum / self.n;
                1.0 - p * p - (1.0 - p) * (1.0 - p)
            }
            Criterion::Mse => (self.sum_sq - self.sum * self.sum / self.n) / self.n,
        }
    }
}

/// Positive fraction of a sample set's 0/1 targets.
pub(crate) fn positive_fraction(targets: &[f64]) -> impl FnMut(&[usize]) -> f64 + '_ {
    move |samples: &[usize]| {
        if samples.is_empty() {
            return 0.5;
        }
        samples.iter().map(|&i| targets[i]).sum::<f64>() / samples.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn fit_classification(rows: &[Vec<f64>], labels: &[f64], opts: &TreeOptions) -> Tree {
        let samples: Vec<usize> = (0..rows.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut leaf = positive_fraction(labels);
        build_tree(rows, labels, samples, opts, &mut rng, &mut leaf)
    }

    #[test]
    fn separable_one_feature_data_fits_perfectly_at_depth_one() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels: Vec<f64> = (0..10).map(|i| if i < 5 { 0.0 } else { 1.0 }).collect();
        let opts = TreeOptions {
            max_depth: 1,
            min_samples_leaf: 1,
            criterion: Criterion::Gini,
            features_per_split: None,
        };
        let tree = fit_classification(&rows, &labels, &opts);
        for (row, label) in rows.iter().zip(&labels) {
            let p = tree.predict(row);
            assert_eq!(p.round(), *label);
        }
        assert_eq!(tree.nodes.len(), 3);
    }

    #[test]
    fn min_samples_leaf_is_respected() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64]).collect();
        let labels = vec![0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let opts = TreeOptions {
            max_depth: 0,
            min_samples_leaf: 4,
            criterion: Criterion::Gini,
            features_per_split: None,
        };
        let tree = fit_classification(&rows, &labels, &opts);
        // every leaf must hold at least 4 samples: with 8 samples that is at
        // most one split
        let splits = tree
            .nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count();
        assert!(splits <= 1);
    }

    #[test]
    fn determinism_across_runs() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i % 7) as f64, (i % 11) as f64, (i * 13 % 5) as f64])
            .collect();
        let labels: Vec<f64> = (0..40).map(|i| f64::from(i % 3 == 0)).collect();
        let opts = TreeOptions {
            max_depth: 0,
            min_samples_leaf: 1,
            criterion: Criterion::Gini,
            features_per_split: Some(2),
        };
        let a = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut leaf = positive_fraction(&labels);
            build_tree(&rows, &labels, (0..40).collect(), &opts, &mut rng, &mut leaf)
        };
        let b = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut leaf = positive_fraction(&labels);
            build_tree(&rows, &labels, (0..40).collect(), &opts, &mut rng, &mut leaf)
        };
        assert_eq!(a, b);
    }

    #[test]
    fn regression_criterion_reduces_variance() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let targets: Vec<f64> = (0..20).map(|i| if i < 10 { -1.0 } else { 2.0 }).collect();
        let opts = TreeOptions {
            max_depth: 1,
            min_samples_leaf: 1,
            criterion: Criterion::Mse,
            features_per_split: None,
        };
        let samples: Vec<usize> = (0..20).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut leaf = |s: &[usize]| s.iter().map(|&i| targets[i]).sum::<f64>() / s.len() as f64;
        let tree = build_tree(&rows, &targets, samples, &opts, &mut rng, &mut leaf);
        assert!((tree.predict(&[3.0]) - -1.0).abs() < 1e-12);
        assert!((tree.predict(&[15.0]) - 2.0).abs() < 1e-12);
    }
}
