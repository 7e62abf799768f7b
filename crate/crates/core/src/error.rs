use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site count {0} outside supported range 2..=16")]
    SiteCount(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("states live on different site counts ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coefficient c = {0} outside [0, 1]")]
    CoefficientOutOfRange(f64),

    #[error("{family} requires an even number of sites, got {n}")]
    OddSiteCount { family: &'static str, n: usize },

    #[error("Dicke excitation count {k} outside 1..={max} for {n} sites")]
    DickeOutOfRange { n: usize, k: usize, max: usize },

    #[error("malformed seed {0:?}: expected a bitstring over {{0,1}}")]
    MalformedSeed(String),

    #[error("parameter {name} = {value} outside its domain")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("class label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("tying labels must form the contiguous range 0..k")]
    NonContiguousLabels,

    #[error("grid needs {required} evaluations, above the budget of {limit}")]
    GridBudget { required: u128, limit: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported hybrid: {0}")]
    UnsupportedHybrid(String),

    #[error("unknown catalog entry or set {0:?}")]
    UnknownEntry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
