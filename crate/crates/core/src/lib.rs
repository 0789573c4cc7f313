//! Wavelet-based feature extraction and tree-ensemble classification for
//! labeled, fixed-length time series.
//!
//! The pipeline: pick scaling filters whose decompositions concentrate
//! signal energy into few coefficients ([`energy`]), transform every series
//! with one or more discrete wavelet transforms and keep only the smooth
//! (plus leftover) coefficients as a compressed feature matrix ([`mdwt`]),
//! then train decision trees or a random forest on the result ([`forest`]).
//! [`ingest`] parses and splits the datasets; [`wavelet`] holds the filter
//! bank and the transform itself.
//!
//! Everything downstream of a seed is deterministic: seeded `ChaCha8`
//! generators with one named substream per concern (dataset splits, exemplar
//! sampling, each forest tree, the pruning holdout), so any single result
//! can be reproduced in isolation and parallel execution cannot reorder
//! random draws.

pub mod energy;
pub mod error;
pub mod forest;
pub mod ingest;
pub mod mdwt;
pub mod wavelet;

pub use energy::{
    npes, npes_of_transform, rank_filters, sample_exemplars, ClassM95,
    FilterRanking, NpesCurve, RankEntry,
};
pub use error::{Error, Result};
pub use forest::tree::{
    criterion_value, prune_reduced_error, train_tree, SplitCriterion, TreeNode,
};
pub use forest::{
    evaluate, train_forest, ClassifierConfig, EvalReport, FeatureConfig,
    ForestModel, ForestParams,
};
pub use ingest::{
    make_splits, smoothness, Delimiter, LabelId, Record, SplitSpec,
    TimeSeriesDataset,
};
pub use mdwt::{
    build_features, feature_width, full_transform_features, raw_features,
    FeatureMatrix, MdwtConfig,
};
pub use wavelet::filters::{filter_bank, WaveletFilter, SUPPORTED_FILTERS};
pub use wavelet::{dwt, idwt, max_feasible_level, mra, Decomposition};
