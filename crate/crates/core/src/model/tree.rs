//! Binary decision trees shared by the forest and boosting models.

use ndarray::ArrayView2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A binary tree over feature vectors. Rows with `x[feature] <= threshold`
/// go left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Tree<F> {
    Split {
        feature: usize,
        threshold: F,
        left: Box<Tree<F>>,
        right: Box<Tree<F>>,
    },
    Leaf {
        value: F,
    },
}

impl<F: Scalar> Tree<F> {
    pub fn predict(&self, features: &[F]) -> F {
        match self {
            Tree::Leaf { value } => *value,
            Tree::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if features[*feature] <= *threshold {
                    left.predict(features)
                } else {
                    right.predict(features)
                }
            }
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            Tree::Leaf { .. } => 0,
            Tree::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            Tree::Leaf { .. } => 1,
            Tree::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

/// Stopping rules for tree growth.
#[derive(Clone, Copy, Debug)]
pub struct GrowConfig {
    pub max_depth: u32,
    /// Smallest number of rows either child of a split may hold.
    pub min_leaf: u32,
}

/// Node statistics that accumulate row by row and subtract, so a sorted
/// sweep can score every cut in one pass.
trait SplitObjective<F> {
    type Stat: Copy;
    fn zero(&self) -> Self::Stat;
    fn add(&self, stat: Self::Stat, row: usize) -> Self::Stat;
    fn sub(&self, whole: Self::Stat, part: Self::Stat) -> Self::Stat;
    /// Impurity in summed units, so sibling nodes combine by addition.
    fn impurity(&self, stat: Self::Stat) -> f64;
    fn leaf_value(&self, stat: Self::Stat) -> F;
}

struct GiniObjective<'a> {
    y: &'a [u8],
}

impl<'a, F: Scalar> SplitObjective<F> for GiniObjective<'a> {
    /// (rows, positives)
    type Stat = (usize, usize);

    fn zero(&self) -> Self::Stat {
        (0, 0)
    }

    fn add(&self, (n, pos): Self::Stat, row: usize) -> Self::Stat {
        (n + 1, pos + usize::from(self.y[row] > 0))
    }

    fn sub(&self, whole: Self::Stat, part: Self::Stat) -> Self::Stat {
        (whole.0 - part.0, whole.1 - part.1)
    }

    fn impurity(&self, (n, pos): Self::Stat) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n_f = n as f64;
        let p = pos as f64 / n_f;
        let q = 1.0 - p;
        n_f * (1.0 - p * p - q * q)
    }

    fn leaf_value(&self, (n, pos): Self::Stat) -> F {
        F::from64((pos as f64 + 1.0) / (n as f64 + 2.0))
    }
}

struct VarianceObjective<'a, F> {
    targets: &'a [F],
}

impl<'a, F: Scalar> SplitObjective<F> for VarianceObjective<'a, F> {
    /// (rows, sum, sum of squares)
    type Stat = (f64, f64, f64);

    fn zero(&self) -> Self::Stat {
        (0.0, 0.0, 0.0)
    }

    fn add(&self, (n, sum, sq): Self::Stat, row: usize) -> Self::Stat {
        let v = self.targets[row].into64();
        (n + 1.0, sum + v, sq + v * v)
    }

    fn sub(&self, whole: Self::Stat, part: Self::Stat) -> Self::Stat {
        (whole.0 - part.0, whole.1 - part.1, whole.2 - part.2)
    }

    fn impurity(&self, (n, sum, sq): Self::Stat) -> f64 {
        if n <= 0.0 {
            return 0.0;
        }
        (sq - sum * sum / n).max(0.0)
    }

    fn leaf_value(&self, (n, sum, _): Self::Stat) -> F {
        F::from64(sum / n)
    }
}

/// Grows a classification tree. Leaves hold add-one smoothed positive
/// fractions `(pos + 1) / (n + 2)`.
pub fn grow_classification<F: Scalar>(
    x: &ArrayView2<F>,
    y: &[u8],
    rows: &[usize],
    features: &[usize],
    cfg: GrowConfig,
) -> Tree<F> {
    let obj = GiniObjective { y };
    grow(x, rows, features, cfg, 0, &obj, &mut keep_all)
}

/// Classification tree that considers a fresh random subset of `mtry`
/// features at every internal node, visited in preorder.
pub fn grow_classification_sampled<F: Scalar>(
    x: &ArrayView2<F>,
    y: &[u8],
    rows: &[usize],
    features: &[usize],
    cfg: GrowConfig,
    mtry: usize,
    rng: &mut ChaCha8Rng,
) -> Tree<F> {
    let obj = GiniObjective { y };
    let mut sampler = |pool: &[usize]| sample_features(pool, mtry, rng);
    grow(x, rows, features, cfg, 0, &obj, &mut sampler)
}

/// Grows a regression tree minimizing squared error. Leaves hold target
/// means.
pub fn grow_regression<F: Scalar>(
    x: &ArrayView2<F>,
    targets: &[F],
    rows: &[usize],
    features: &[usize],
    cfg: GrowConfig,
) -> Tree<F> {
    let obj = VarianceObjective { targets };
    grow(x, rows, features, cfg, 0, &obj, &mut keep_all)
}

fn keep_all(pool: &[usize]) -> Vec<usize> {
    pool.to_vec()
}

/// Draws `mtry` distinct features and returns them ascending, so the
/// lowest-index tie-break still applies within the sample.
fn sample_features(pool: &[usize], mtry: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let m = mtry.clamp(1, pool.len());
    let mut scratch = pool.to_vec();
    for i in 0..m {
        let j = rng.gen_range(i..scratch.len());
        scratch.swap(i, j);
    }
    scratch.truncate(m);
    scratch.sort_unstable();
    scratch
}

fn grow<F: Scalar, O: SplitObjective<F>>(
    x: &ArrayView2<F>,
    rows: &[usize],
    features: &[usize],
    cfg: GrowConfig,
    depth: u32,
    obj: &O,
    sampler: &mut dyn FnMut(&[usize]) -> Vec<usize>,
) -> Tree<F> {
    let total = rows.iter().fold(obj.zero(), |s, &r| obj.add(s, r));
    let leaf = Tree::Leaf {
        value: obj.leaf_value(total),
    };
    let min_leaf = cfg.min_leaf.max(1) as usize;
    if depth >= cfg.max_depth || rows.len() < 2 * min_leaf {
        return leaf;
    }
    let parent = obj.impurity(total);
    if parent <= 0.0 {
        return leaf;
    }

    let candidates = sampler(features);
    let mut best_score = parent;
    let mut best: Option<(usize, F)> = None;
    let mut sorted = rows.to_vec();
    for &f in &candidates {
        sorted.sort_by(|&a, &b| {
            x[(a, f)]
                .partial_cmp(&x[(b, f)])
                .expect("finite feature values")
                .then(a.cmp(&b))
        });
        let mut left = obj.zero();
        for cut in 1..sorted.len() {
            left = obj.add(left, sorted[cut - 1]);
            if cut < min_leaf || sorted.len() - cut < min_leaf {
                continue;
            }
            let lo = x[(sorted[cut - 1], f)];
            let hi = x[(sorted[cut], f)];
            if lo == hi {
                continue;
            }
            let score = obj.impurity(left) + obj.impurity(obj.sub(total, left));
            if score < best_score {
                best_score = score;
                let two = F::from64(2.0);
                best = Some((f, (lo + hi) / two));
            }
        }
    }

    match best {
        None => leaf,
        Some((feature, threshold)) => {
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                rows.iter().partition(|&&r| x[(r, feature)] <= threshold);
            let left = grow(x, &left_rows, features, cfg, depth + 1, obj, sampler);
            let right = grow(x, &right_rows, features, cfg, depth + 1, obj, sampler);
            Tree::Split {
                feature,
                threshold,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn all_rows(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn depth_zero_yields_smoothed_overall_fraction() {
        let x = array![[0.0f64], [1.0], [2.0], [3.0]];
        let y = [0u8, 0, 1, 1];
        let cfg = GrowConfig { max_depth: 0, min_leaf: 1 };
        let t = grow_classification(&x.view(), &y, &all_rows(4), &[0], cfg);
        // (2 + 1) / (4 + 2)
        assert_eq!(t, Tree::Leaf { value: 0.5 });
    }

    #[test]
    fn stump_finds_the_separating_midpoint() {
        // Labels flip between x = 1.0 and x = 2.0, so the stump must cut
        // at their midpoint, 1.5.
        let x = array![[0.0f64], [1.0], [2.0], [3.0]];
        let y = [0u8, 0, 1, 1];
        let cfg = GrowConfig { max_depth: 1, min_leaf: 1 };
        let t = grow_classification(&x.view(), &y, &all_rows(4), &[0], cfg);
        match t {
            Tree::Split { feature, threshold, left, right } => {
                assert_eq!(feature, 0);
                assert_abs_diff_eq!(threshold, 1.5);
                // Left leaf: 0 of 2 positive -> 1/4. Right: 2 of 2 -> 3/4.
                assert_eq!(*left, Tree::Leaf { value: 0.25 });
                assert_eq!(*right, Tree::Leaf { value: 0.75 });
            }
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn ties_resolve_to_lowest_feature_then_lowest_threshold() {
        // Both features separate the labels perfectly; feature 0 must win.
        let x = array![[0.0f64, 10.0], [1.0, 11.0], [2.0, 12.0], [3.0, 13.0]];
        let y = [0u8, 0, 1, 1];
        let cfg = GrowConfig { max_depth: 1, min_leaf: 1 };
        let t = grow_classification(&x.view(), &y, &all_rows(4), &[0, 1], cfg);
        match t {
            Tree::Split { feature, threshold, .. } => {
                assert_eq!(feature, 0);
                assert_abs_diff_eq!(threshold, 1.5);
            }
            other => panic!("expected a split, got {other:?}"),
        }

        // One feature, two cuts with equal gain: the lower threshold wins.
        // Labels 0,1,0: cutting at 0.5 or at 1.5 each isolate one zero.
        let x2 = array![[0.0f64], [1.0], [2.0]];
        let y2 = [0u8, 1, 0];
        let t2 = grow_classification(&x2.view(), &y2, &all_rows(3), &[0], cfg);
        match t2 {
            Tree::Split { threshold, .. } => assert_abs_diff_eq!(threshold, 0.5),
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn min_leaf_blocks_unbalanced_cuts() {
        let x = array![[0.0f64], [1.0], [2.0], [3.0], [4.0], [5.0]];
        let y = [1u8, 0, 0, 0, 0, 0];
        // Isolating the single positive needs a 1-row child; min_leaf 2
        // forbids it, so the best legal cut is at 1.5 (2 rows | 4 rows).
        let cfg = GrowConfig { max_depth: 1, min_leaf: 2 };
        let t = grow_classification(&x.view(), &y, &all_rows(6), &[0], cfg);
        match t {
            Tree::Split { threshold, .. } => assert_abs_diff_eq!(threshold, 1.5),
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn pure_nodes_stop_growing() {
        let x = array![[0.0f64], [1.0], [2.0]];
        let y = [1u8, 1, 1];
        let cfg = GrowConfig { max_depth: 5, min_leaf: 1 };
        let t = grow_classification(&x.view(), &y, &all_rows(3), &[0], cfg);
        // (3 + 1) / (3 + 2)
        assert_eq!(t, Tree::Leaf { value: 0.8 });
    }

    #[test]
    fn regression_tree_recovers_a_step_function() {
        let x = array![[0.0f64], [1.0], [2.0], [3.0]];
        let targets = [-1.0f64, -1.0, 5.0, 5.0];
        let cfg = GrowConfig { max_depth: 2, min_leaf: 1 };
        let t = grow_regression(&x.view(), &targets, &all_rows(4), &[0], cfg);
        assert_abs_diff_eq!(t.predict(&[0.5]), -1.0);
        assert_abs_diff_eq!(t.predict(&[2.9]), 5.0);
        assert_eq!(t.n_leaves(), 2);
    }

    #[test]
    fn constant_targets_make_a_single_leaf() {
        let x = array![[0.0f64], [1.0], [2.0]];
        let targets = [0.25f64, 0.25, 0.25];
        let cfg = GrowConfig { max_depth: 3, min_leaf: 1 };
        let t = grow_regression(&x.view(), &targets, &all_rows(3), &[0], cfg);
        assert_eq!(t, Tree::Leaf { value: 0.25 });
    }

    #[test]
    fn sampled_growth_repeats_under_one_seed() {
        use crate::seed::RandomSeed;
        let x = array![
            [0.1f64, 3.0],
            [0.9, 2.0],
            [0.4, 8.0],
            [0.7, 6.0],
            [0.2, 7.0],
            [0.8, 1.0]
        ];
        let y = [0u8, 1, 0, 1, 0, 1];
        let cfg = GrowConfig { max_depth: 3, min_leaf: 1 };
        let grow_with = |seed: u64| {
            let mut rng = RandomSeed(seed).child("tree", 0).rng();
            grow_classification_sampled(&x.view(), &y, &all_rows(6), &[0, 1], cfg, 1, &mut rng)
        };
        assert_eq!(grow_with(5), grow_with(5));
    }

    #[test]
    fn prediction_follows_the_left_on_equal_rule() {
        let t = Tree::Split {
            feature: 0,
            threshold: 1.0f64,
            left: Box::new(Tree::Leaf { value: 0.1 }),
            right: Box::new(Tree::Leaf { value: 0.9 }),
        };
        assert_abs_diff_eq!(t.predict(&[1.0]), 0.1);
        assert_abs_diff_eq!(t.predict(&[1.0 + 1e-9]), 0.9);
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn deeper_trees_fit_an_interaction() {
        // An exactly balanced XOR gives every first cut zero gain, so the
        // duplicated corner tips the scales and depth two finishes the job.
        let x = array![
            [0.0f64, 0.0],
            [0.0, 0.0],
            [0.0, 1.0],
            [1.0, 0.0],
            [1.0, 1.0]
        ];
        let y = [0u8, 0, 1, 1, 0];
        let cfg = GrowConfig { max_depth: 2, min_leaf: 1 };
        let t = grow_classification(&x.view(), &y, &all_rows(5), &[0, 1], cfg);
        assert!(t.predict(&[0.0, 0.0]) < 0.5);
        assert!(t.predict(&[0.0, 1.0]) > 0.5);
        assert!(t.predict(&[1.0, 0.0]) > 0.5);
        assert!(t.predict(&[1.0, 1.0]) < 0.5);
    }
}
