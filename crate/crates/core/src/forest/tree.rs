//! Greedy top-down decision-tree induction over numeric features.
//!
//! Candidate thresholds sit at midpoints between consecutive distinct sorted
//! values of a column. Split quality comes from integer class counts only,
//! so any two code paths that tally the same partition produce bit-identical
//! criterion values; the search scans columns ascending and thresholds
//! ascending and replaces the incumbent only on a strict improvement, which
//! makes every tie-break (lowest column, then lowest threshold) exact rather
//! than tolerance-based. Class-label ties resolve to the lowest id in the
//! canonical class order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::LabelId;
use crate::mdwt::FeatureMatrix;

/// Split-quality measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    /// Information gain normalized by the split's own entropy (C4.5-style).
    GainRatio,
    /// Gini impurity decrease (CART-style).
    Gini,
}

impl SplitCriterion {
    pub fn name(self) -> &'static str {
        match self {
            SplitCriterion::GainRatio => "gain_ratio",
            SplitCriterion::Gini => "gini",
        }
    }
}

/// A trained tree: leaves carry the majority class and the full training
/// class-count distribution; internal nodes send `value <= threshold` left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        class: LabelId,
        counts: Vec<usize>,
    },
    Split {
        column: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    /// Root-to-leaf descent.
    ///
    /// # Errors
    /// `WidthMismatch` when the row is narrower than a column the tree
    /// consults.
    pub fn predict(&self, row: &[f64]) -> Result<LabelId> {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class, .. } => return Ok(*class),
                TreeNode::Split {
                    column,
                    threshold,
                    left,
                    right,
                } => {
                    let Some(&v) = row.get(*column) else {
                        return Err(Error::WidthMismatch {
                            expected: column + 1,
                            got: row.len(),
                        });
                    };
                    node = if v <= *threshold { left } else { right };
                }
            }
        }
    }

    /// Total number of nodes, leaves included.
    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => {
                1 + left.node_count() + right.node_count()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => {
                1 + left.depth().max(right.depth())
            }
        }
    }

    /// Training class counts aggregated over all descendant leaves.
    fn aggregate_counts(&self) -> Vec<usize> {
        match self {
            TreeNode::Leaf { counts, .. } => counts.clone(),
            TreeNode::Split { left, right, .. } => {
                let mut c = left.aggregate_counts();
                for (a, b) in c.iter_mut().zip(right.aggregate_counts()) {
                    *a += b;
                }
                c
            }
        }
    }
}

/// Majority class: highest count, lowest id on ties.
pub(crate) fn majority(counts: &[usize]) -> LabelId {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    LabelId(best)
}

fn entropy_term(count: usize, total: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        let p = count as f64 / total;
        -p * p.log2()
    }
}

/// Split quality from the class counts of the two sides (each must hold at
/// least one row).
///
/// Both the greedy search and any exhaustive re-check call this same
/// function on the same integer counts, so equal splits score bit-identically
/// and tie-breaks are exact.
pub fn criterion_value(
    criterion: SplitCriterion,
    left: &[usize],
    right: &[usize],
) -> f64 {
    debug_assert_eq!(left.len(), right.len());
    let nl = left.iter().sum::<usize>() as f64;
    let nr = right.iter().sum::<usize>() as f64;
    let n = nl + nr;
    match criterion {
        SplitCriterion::GainRatio => {
            let mut h_parent = 0.0;
            let mut h_left = 0.0;
            let mut h_right = 0.0;
            for (&l, &r) in left.iter().zip(right) {
                h_parent += entropy_term(l + r, n);
                h_left += entropy_term(l, nl);
                h_right += entropy_term(r, nr);
            }
            let gain = h_parent - (nl / n) * h_left - (nr / n) * h_right;
            let split_info =
                entropy_term(nl as usize, n) + entropy_term(nr as usize, n);
            gain / split_info
        }
        SplitCriterion::Gini => {
            let mut sq_parent = 0.0;
            let mut sq_left = 0.0;
            let mut sq_right = 0.0;
            for (&l, &r) in left.iter().zip(right) {
                let pp = (l + r) as f64 / n;
                let pl = l as f64 / nl;
                let pr = r as f64 / nr;
                sq_parent += pp * pp;
                sq_left += pl * pl;
                sq_right += pr * pr;
            }
            (1.0 - sq_parent)
                - (nl / n) * (1.0 - sq_left)
                - (nr / n) * (1.0 - sq_right)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BestSplit {
    pub column: usize,
    pub threshold: f64,
    pub value: f64,
}

/// Scan the given columns (callers pass them ascending) for the best
/// positive-value split of `rows`, honoring `min_leaf` on both sides.
pub(crate) fn find_best_split(
    m: &FeatureMatrix,
    rows: &[usize],
    columns: &[usize],
    criterion: SplitCriterion,
    min_leaf: usize,
    parent_counts: &[usize],
) -> Option<BestSplit> {
    let n = rows.len();
    let c = parent_counts.len();
    let mut best: Option<BestSplit> = None;
    let mut sorted: Vec<(f64, LabelId)> = Vec::with_capacity(n);
    let mut left = vec![0usize; c];
    let mut right = vec![0usize; c];
    for &col in columns {
        sorted.clear();
        sorted.extend(rows.iter().map(|&r| (m.row(r)[col], m.label(r))));
        sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        left.iter_mut().for_each(|x| *x = 0);
        for i in 1..n {
            left[sorted[i - 1].1 .0] += 1;
            let (a, b) = (sorted[i - 1].0, sorted[i].0);
            if a == b {
                continue;
            }
            if i < min_leaf || n - i < min_leaf {
                continue;
            }
            for k in 0..c {
                right[k] = parent_counts[k] - left[k];
            }
            let value = criterion_value(criterion, &left, &right);
            if value > 0.0 && best.is_none_or(|bs| value > bs.value) {
                // Midpoint, clamped so the boundary value itself goes left
                // even when the midpoint rounds up to `b`.
                let mut threshold = a + (b - a) / 2.0;
                if threshold >= b {
                    threshold = a;
                }
                best = Some(BestSplit {
                    column: col,
                    threshold,
                    value,
                });
            }
        }
    }
    best
}

fn count_labels(m: &FeatureMatrix, rows: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; m.class_domain().len()];
    for &r in rows {
        counts[m.label(r).0] += 1;
    }
    counts
}

pub(crate) fn grow(
    m: &FeatureMatrix,
    rows: Vec<usize>,
    criterion: SplitCriterion,
    min_leaf: usize,
    max_depth: Option<usize>,
    depth: usize,
    sample_columns: &mut dyn FnMut() -> Vec<usize>,
) -> TreeNode {
    let counts = count_labels(m, &rows);
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    let capped = max_depth.is_some_and(|d| depth >= d);
    if pure || capped {
        return TreeNode::Leaf {
            class: majority(&counts),
            counts,
        };
    }
    let columns = sample_columns();
    let Some(bs) = find_best_split(m, &rows, &columns, criterion, min_leaf, &counts)
    else {
        return TreeNode::Leaf {
            class: majority(&counts),
            counts,
        };
    };
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
        .into_iter()
        .partition(|&r| m.row(r)[bs.column] <= bs.threshold);
    let left = grow(
        m,
        left_rows,
        criterion,
        min_leaf,
        max_depth,
        depth + 1,
        sample_columns,
    );
    let right = grow(
        m,
        right_rows,
        criterion,
        min_leaf,
        max_depth,
        depth + 1,
        sample_columns,
    );
    TreeNode::Split {
        column: bs.column,
        threshold: bs.threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// Train a single tree on the whole matrix, considering every column at
/// every node.
///
/// Recursion stops on purity, on `max_depth`, when `min_leaf` leaves no
/// legal split, or when no split has positive criterion value.
pub fn train_tree(
    train: &FeatureMatrix,
    criterion: SplitCriterion,
    min_leaf: usize,
    max_depth: Option<usize>,
) -> Result<TreeNode> {
    if train.k() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if train.width() == 0 {
        return Err(Error::InvalidParameter(
            "training data has no feature columns".into(),
        ));
    }
    if min_leaf == 0 {
        return Err(Error::InvalidParameter(
            "min_leaf must be at least 1".into(),
        ));
    }
    let all: Vec<usize> = (0..train.width()).collect();
    let mut sampler = || all.clone();
    Ok(grow(
        train,
        (0..train.k()).collect(),
        criterion,
        min_leaf,
        max_depth,
        0,
        &mut sampler,
    ))
}

/// Reduced-error pruning: bottom-up, replace a subtree with a leaf (majority
/// of its training counts) whenever that leaf misclassifies no more of the
/// validation rows reaching the subtree than the subtree does. Subtrees no
/// validation row reaches collapse to leaves.
pub fn prune_reduced_error(
    root: TreeNode,
    validation: &FeatureMatrix,
    rows: &[usize],
) -> TreeNode {
    fn rec(node: TreeNode, m: &FeatureMatrix, rows: Vec<usize>) -> (TreeNode, usize) {
        match node {
            TreeNode::Leaf { class, counts } => {
                let errors =
                    rows.iter().filter(|&&r| m.label(r) != class).count();
                (TreeNode::Leaf { class, counts }, errors)
            }
            TreeNode::Split {
                column,
                threshold,
                left,
                right,
            } => {
                let (lrows, rrows): (Vec<usize>, Vec<usize>) = rows
                    .iter()
                    .partition(|&&r| m.row(r)[column] <= threshold);
                let (left, le) = rec(*left, m, lrows);
                let (right, re) = rec(*right, m, rrows);
                let subtree = TreeNode::Split {
                    column,
                    threshold,
                    left: Box::new(left),
                    right: Box::new(right),
                };
                let counts = subtree.aggregate_counts();
                let class = majority(&counts);
                let leaf_errors =
                    rows.iter().filter(|&&r| m.label(r) != class).count();
                if leaf_errors <= le + re {
                    (TreeNode::Leaf { class, counts }, leaf_errors)
                } else {
                    (subtree, le + re)
                }
            }
        }
    }
    rec(root, validation, rows.to_vec()).0
}
