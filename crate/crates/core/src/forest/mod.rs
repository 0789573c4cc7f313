//! Tree and forest classifiers plus the evaluation harness that wires
//! featurization, training, and split protocols into one report.
//!
//! Determinism contract: every random choice is a pure function of the
//! caller's seed. One `ChaCha8Rng` substream per concern — tree `t` of a
//! forest draws from stream `FOREST_TREE_STREAM_BASE + t`, so training is
//! schedule-independent under rayon, and the pruning holdout draws from its
//! own stream so enabling pruning never perturbs anything else.

pub mod tree;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ingest::{make_splits, LabelId, SplitSpec, TimeSeriesDataset};
use crate::mdwt::{build_features, raw_features, FeatureMatrix, MdwtConfig};
use tree::{
    grow, majority, prune_reduced_error, train_tree, SplitCriterion, TreeNode,
};

/// Substream for the pruning validation holdout.
const PRUNE_STREAM: u64 = 2;
/// Tree `t` of a forest draws from substream `FOREST_TREE_STREAM_BASE + t`.
const FOREST_TREE_STREAM_BASE: u64 = 3;

/// Knobs for [`train_forest`]. `mtry = None` resolves to `⌊√A⌋` (at least 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub trees: usize,
    pub mtry: Option<usize>,
    pub min_leaf: usize,
    /// Draw each tree's training set as K rows with replacement. Disabling
    /// this trains every tree on the full data (useful with `mtry = A` to
    /// reduce the forest to a single deterministic Gini tree).
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            trees: 100,
            mtry: None,
            min_leaf: 1,
            bootstrap: true,
            seed: 0,
        }
    }
}

/// A bagged ensemble of Gini trees with majority voting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<TreeNode>,
    mtry: usize,
    seed: u64,
    /// Fraction of out-of-bag-voted training rows the ensemble misclassifies;
    /// `None` when no row was ever out of bag (e.g. bootstrap disabled).
    oob_estimate: Option<f64>,
    width: usize,
    class_domain: Vec<String>,
}

impl ForestModel {
    pub fn trees(&self) -> &[TreeNode] {
        &self.trees
    }

    /// Tree count `T`.
    pub fn t(&self) -> usize {
        self.trees.len()
    }

    /// Candidate columns drawn at each split.
    pub fn mtry(&self) -> usize {
        self.mtry
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn oob_estimate(&self) -> Option<f64> {
        self.oob_estimate
    }

    /// Feature width the forest was trained on.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn class_domain(&self) -> &[String] {
        &self.class_domain
    }

    /// Total node count across all trees.
    pub fn node_count(&self) -> usize {
        self.trees.iter().map(TreeNode::node_count).sum()
    }

    /// Majority vote over the trees; vote ties go to the lowest class id in
    /// the canonical (sorted) class order.
    ///
    /// # Errors
    /// `WidthMismatch` when the row width differs from the training width.
    pub fn predict(&self, row: &[f64]) -> Result<LabelId> {
        if row.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: row.len(),
            });
        }
        let mut votes = vec![0usize; self.class_domain.len()];
        for tree in &self.trees {
            votes[tree.predict(row)?.0] += 1;
        }
        Ok(majority(&votes))
    }
}

/// Train a random forest: `trees` Gini trees, each on its own bootstrap
/// sample (when enabled) with `mtry` candidate columns drawn per node.
///
/// Tree `t` seeds its own RNG substream from `(params.seed, t)`, so the
/// result is byte-identical regardless of how rayon schedules the work.
/// When `mtry` equals the full width no sampling happens at all, which makes
/// `trees=1, bootstrap=false` coincide exactly with [`train_tree`] under the
/// Gini criterion.
///
/// # Errors
/// `EmptyTrainingSet` / `InvalidParameter` for empty data, zero trees, zero
/// `min_leaf`, or `mtry` outside `1..=A`.
pub fn train_forest(
    train: &FeatureMatrix,
    params: &ForestParams,
) -> Result<ForestModel> {
    if train.k() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if train.width() == 0 {
        return Err(Error::InvalidParameter(
            "training data has no feature columns".into(),
        ));
    }
    if params.trees == 0 {
        return Err(Error::InvalidParameter("forest needs at least 1 tree".into()));
    }
    if params.min_leaf == 0 {
        return Err(Error::InvalidParameter("min_leaf must be at least 1".into()));
    }
    let a = train.width();
    let mtry = match params.mtry {
        None => ((a as f64).sqrt().floor() as usize).max(1),
        Some(m) if (1..=a).contains(&m) => m,
        Some(m) => {
            return Err(Error::InvalidParameter(format!(
                "mtry {m} outside 1..={a}"
            )))
        }
    };
    let k = train.k();
    let grown: Vec<(TreeNode, Vec<bool>)> = (0..params.trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(FOREST_TREE_STREAM_BASE + t as u64);
            let rows: Vec<usize> = if params.bootstrap {
                (0..k).map(|_| rng.random_range(0..k)).collect()
            } else {
                (0..k).collect()
            };
            let mut inbag = vec![false; k];
            for &r in &rows {
                inbag[r] = true;
            }
            let all: Vec<usize> = (0..a).collect();
            let tree = if mtry == a {
                let mut sampler = || all.clone();
                grow(
                    train,
                    rows,
                    SplitCriterion::Gini,
                    params.min_leaf,
                    None,
                    0,
                    &mut sampler,
                )
            } else {
                let mut sampler = || {
                    let mut cols =
                        rand::seq::index::sample(&mut rng, a, mtry).into_vec();
                    cols.sort_unstable();
                    cols
                };
                grow(
                    train,
                    rows,
                    SplitCriterion::Gini,
                    params.min_leaf,
                    None,
                    0,
                    &mut sampler,
                )
            };
            (tree, inbag)
        })
        .collect();

    let c = train.class_domain().len();
    let mut voted = 0usize;
    let mut errors = 0usize;
    for i in 0..k {
        let mut votes = vec![0usize; c];
        let mut any = false;
        for (tree, inbag) in &grown {
            if !inbag[i] {
                votes[tree.predict(train.row(i))?.0] += 1;
                any = true;
            }
        }
        if any {
            voted += 1;
            if majority(&votes) != train.label(i) {
                errors += 1;
            }
        }
    }
    let oob_estimate = (voted > 0).then(|| errors as f64 / voted as f64);

    Ok(ForestModel {
        trees: grown.into_iter().map(|(t, _)| t).collect(),
        mtry,
        seed: params.seed,
        oob_estimate,
        width: a,
        class_domain: train.class_domain().to_vec(),
    })
}

/// How to turn a dataset into a feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FeatureConfig {
    /// The raw samples, one column per time point.
    Raw,
    /// Wavelet features per the embedded configuration.
    Mdwt(MdwtConfig),
}

impl FeatureConfig {
    /// Stable one-line description, also used in report hashing.
    pub fn descriptor(&self) -> String {
        match self {
            FeatureConfig::Raw => "raw".to_string(),
            FeatureConfig::Mdwt(cfg) => cfg.descriptor(),
        }
    }

    pub fn build(&self, d: &TimeSeriesDataset) -> Result<FeatureMatrix> {
        match self {
            FeatureConfig::Raw => Ok(raw_features(d)),
            FeatureConfig::Mdwt(cfg) => build_features(d, cfg),
        }
    }
}

/// Which classifier to train and its hyperparameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ClassifierConfig {
    /// Gain-ratio tree (C4.5 family).
    GainRatioTree {
        min_leaf: usize,
        max_depth: Option<usize>,
    },
    /// Gini tree (CART family); `prune` holds out part of the training data
    /// for reduced-error pruning.
    GiniTree {
        min_leaf: usize,
        max_depth: Option<usize>,
        prune: bool,
    },
    /// Bagged Gini forest.
    Forest {
        trees: usize,
        mtry: Option<usize>,
        min_leaf: usize,
        bootstrap: bool,
    },
}

impl ClassifierConfig {
    pub fn gain_ratio_tree() -> Self {
        ClassifierConfig::GainRatioTree {
            min_leaf: 2,
            max_depth: None,
        }
    }

    pub fn gini_tree() -> Self {
        ClassifierConfig::GiniTree {
            min_leaf: 2,
            max_depth: None,
            prune: false,
        }
    }

    pub fn forest() -> Self {
        ClassifierConfig::Forest {
            trees: 100,
            mtry: None,
            min_leaf: 1,
            bootstrap: true,
        }
    }

    /// Stable one-line description, also used in report hashing.
    pub fn descriptor(&self) -> String {
        fn depth_part(d: Option<usize>) -> String {
            d.map(|d| format!(";max_depth={d}")).unwrap_or_default()
        }
        match self {
            ClassifierConfig::GainRatioTree { min_leaf, max_depth } => {
                format!("j48;min_leaf={min_leaf}{}", depth_part(*max_depth))
            }
            ClassifierConfig::GiniTree {
                min_leaf,
                max_depth,
                prune,
            } => format!(
                "cart;min_leaf={min_leaf}{};prune={prune}",
                depth_part(*max_depth)
            ),
            ClassifierConfig::Forest {
                trees,
                mtry,
                min_leaf,
                bootstrap,
            } => format!(
                "rforest;trees={trees};mtry={};min_leaf={min_leaf};bootstrap={bootstrap}",
                mtry.map_or_else(|| "auto".to_string(), |m| m.to_string()),
            ),
        }
    }
}

/// Gini tree with reduced-error pruning against a stratified 20% holdout of
/// the training rows (its own RNG substream, so results do not disturb any
/// other seeded choice). Falls back to an unpruned tree when either side of
/// the holdout would be empty.
fn train_pruned_gini(
    m: &FeatureMatrix,
    min_leaf: usize,
    max_depth: Option<usize>,
    seed: u64,
) -> Result<TreeNode> {
    if m.k() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if m.width() == 0 {
        return Err(Error::InvalidParameter(
            "training data has no feature columns".into(),
        ));
    }
    if min_leaf == 0 {
        return Err(Error::InvalidParameter("min_leaf must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(PRUNE_STREAM);
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); m.class_domain().len()];
    for i in 0..m.k() {
        per_class[m.label(i).0].push(i);
    }
    let mut grow_rows = Vec::new();
    let mut val_rows = Vec::new();
    for mut rows in per_class {
        rows.shuffle(&mut rng);
        let keep = ((0.8 * rows.len() as f64).round() as usize).min(rows.len());
        val_rows.extend(rows.split_off(keep));
        grow_rows.extend(rows);
    }
    grow_rows.sort_unstable();
    val_rows.sort_unstable();
    if grow_rows.is_empty() || val_rows.is_empty() {
        return train_tree(m, SplitCriterion::Gini, min_leaf, max_depth);
    }
    let all: Vec<usize> = (0..m.width()).collect();
    let mut sampler = || all.clone();
    let full = grow(
        m,
        grow_rows,
        SplitCriterion::Gini,
        min_leaf,
        max_depth,
        0,
        &mut sampler,
    );
    Ok(prune_reduced_error(full, m, &val_rows))
}

enum TrainedModel {
    Tree(TreeNode),
    Forest(ForestModel),
}

impl TrainedModel {
    fn fit(
        m: &FeatureMatrix,
        cfg: &ClassifierConfig,
        seed: u64,
    ) -> Result<TrainedModel> {
        match cfg {
            ClassifierConfig::GainRatioTree { min_leaf, max_depth } => {
                Ok(TrainedModel::Tree(train_tree(
                    m,
                    SplitCriterion::GainRatio,
                    *min_leaf,
                    *max_depth,
                )?))
            }
            ClassifierConfig::GiniTree {
                min_leaf,
                max_depth,
                prune,
            } => Ok(TrainedModel::Tree(if *prune {
                train_pruned_gini(m, *min_leaf, *max_depth, seed)?
            } else {
                train_tree(m, SplitCriterion::Gini, *min_leaf, *max_depth)?
            })),
            ClassifierConfig::Forest {
                trees,
                mtry,
                min_leaf,
                bootstrap,
            } => Ok(TrainedModel::Forest(train_forest(
                m,
                &ForestParams {
                    trees: *trees,
                    mtry: *mtry,
                    min_leaf: *min_leaf,
                    bootstrap: *bootstrap,
                    seed,
                },
            )?)),
        }
    }

    fn predict(&self, row: &[f64]) -> Result<LabelId> {
        match self {
            TrainedModel::Tree(t) => t.predict(row),
            TrainedModel::Forest(f) => f.predict(row),
        }
    }

    fn node_count(&self) -> usize {
        match self {
            TrainedModel::Tree(t) => t.node_count(),
            TrainedModel::Forest(f) => f.node_count(),
        }
    }
}

/// Accuracy report pooled over all (train, test) pairs of a split protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Split protocol descriptor (e.g. `cv:10;seed=42;stratified=true`).
    pub protocol: String,
    /// Feature configuration descriptor.
    pub feature_config: String,
    /// Classifier configuration descriptor.
    pub classifier: String,
    /// Canonical class order indexing the confusion matrix.
    pub class_domain: Vec<String>,
    /// Pooled accuracy, percent.
    pub accuracy_percent: f64,
    /// `confusion[actual][predicted]`, pooled over all test partitions.
    pub confusion: Vec<Vec<u64>>,
    /// Test accuracy (percent) of each (train, test) pair.
    pub fold_accuracies: Vec<f64>,
    /// Test-partition sizes, aligned with `fold_accuracies`.
    pub fold_sizes: Vec<usize>,
    /// Model size (total nodes) trained for each pair.
    pub node_counts: Vec<usize>,
    /// Feature-matrix width `A`.
    pub feature_width: usize,
    /// Seed the classifier was trained with.
    pub seed: u64,
    /// SHA-256 over `protocol|features|classifier|seed`.
    pub config_hash: String,
    /// Library version that produced the report.
    pub version: String,
}

impl EvalReport {
    /// Accuracy recomputed from the embedded confusion matrix; equals
    /// `accuracy_percent` exactly.
    pub fn recomputed_accuracy(&self) -> f64 {
        let total: u64 = self.confusion.iter().flatten().sum();
        let trace: u64 = (0..self.confusion.len())
            .map(|i| self.confusion[i][i])
            .sum();
        100.0 * trace as f64 / total as f64
    }

    /// Header for [`EvalReport::csv_row`].
    pub fn csv_header() -> &'static str {
        "protocol,features,classifier,accuracy_percent,feature_width,total_nodes,seed,config_hash"
    }

    /// One flat line for results tables. Descriptor strings never contain
    /// commas, so no quoting is needed.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.protocol,
            self.feature_config,
            self.classifier,
            self.accuracy_percent,
            self.feature_width,
            self.node_counts.iter().sum::<usize>(),
            self.seed,
            self.config_hash,
        )
    }
}

/// Run one full experiment: materialize the split protocol, featurize each
/// train/test pair with the same configuration (the transform is per-record,
/// so nothing leaks across the boundary), train the classifier with `seed`,
/// and pool the test confusion counts into an [`EvalReport`].
pub fn evaluate(
    d: &TimeSeriesDataset,
    features: &FeatureConfig,
    classifier: &ClassifierConfig,
    split: &SplitSpec,
    seed: u64,
) -> Result<EvalReport> {
    let splits = make_splits(d, split)?;
    let c = d.class_domain().len();
    let mut confusion = vec![vec![0u64; c]; c];
    let mut fold_accuracies = Vec::with_capacity(splits.len());
    let mut fold_sizes = Vec::with_capacity(splits.len());
    let mut node_counts = Vec::with_capacity(splits.len());
    let mut feature_width = 0usize;
    for (train_d, test_d) in &splits {
        let train_m = features.build(train_d)?;
        let test_m = features.build(test_d)?;
        if test_m.k() == 0 {
            return Err(Error::InvalidSplit("a test partition is empty".into()));
        }
        feature_width = train_m.width();
        let model = TrainedModel::fit(&train_m, classifier, seed)?;
        let mut correct = 0u64;
        for i in 0..test_m.k() {
            let predicted = model.predict(test_m.row(i))?;
            let actual = test_m.label(i);
            confusion[actual.0][predicted.0] += 1;
            if predicted == actual {
                correct += 1;
            }
        }
        fold_accuracies.push(100.0 * correct as f64 / test_m.k() as f64);
        fold_sizes.push(test_m.k());
        node_counts.push(model.node_count());
    }
    let total: u64 = confusion.iter().flatten().sum();
    let trace: u64 = (0..c).map(|i| confusion[i][i]).sum();
    let protocol = split.descriptor();
    let feature_desc = features.descriptor();
    let classifier_desc = classifier.descriptor();
    let config_hash = hex::encode(Sha256::digest(
        format!("{protocol}|{feature_desc}|{classifier_desc}|{seed}").as_bytes(),
    ));
    Ok(EvalReport {
        protocol,
        feature_config: feature_desc,
        classifier: classifier_desc,
        class_domain: d.class_domain().to_vec(),
        accuracy_percent: 100.0 * trace as f64 / total as f64,
        confusion,
        fold_accuracies,
        fold_sizes,
        node_counts,
        feature_width,
        seed,
        config_hash,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}
