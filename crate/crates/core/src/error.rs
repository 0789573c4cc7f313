use std::path::PathBuf;

/// Unified error type for the whole pipeline.
///
/// Variants carry enough context to print a usable one-line diagnosis;
/// callers that need exit-code mapping can match on the variant class.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path} contains no records")]
    EmptyFile { path: PathBuf },

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series too short: need at least {min} samples, got {n}")]
    SeriesTooShort { n: usize, min: usize },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error(
        "class {label:?} has {count} records, fewer than {k} folds; \
         use a non-stratified split instead"
    )]
    ClassTooSmall {
        label: String,
        count: usize,
        k: usize,
    },

    #[error("unknown wavelet filter {name:?}; supported: {supported}")]
    UnknownFilter { name: String, supported: String },

    #[error(
        "level {requested} is infeasible for n={n} with filter {filter} \
         (L={l}); maximum feasible level is {max}"
    )]
    LevelTooDeep {
        filter: String,
        l: usize,
        n: usize,
        requested: usize,
        max: usize,
    },

    #[error("inconsistent decomposition: {0}")]
    InconsistentDecomposition(String),

    #[error("cannot compute energy fractions of an all-zero vector")]
    ZeroEnergy,

    #[error("class {label:?} has no records")]
    EmptyClass { label: String },

    #[error("no candidate filters given")]
    NoCandidates,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("feature width mismatch: model expects {expected}, row has {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
