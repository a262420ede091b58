use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("distance matrix is {rows}x{cols} but there are {points} points")]
    DimensionMismatch {
        points: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid distance {value} between `{a}` and `{b}`")]
    InvalidDistance { a: String, b: String, value: f64 },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("map is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("relation is not surjective: target point `{0}` is not covered")]
    NotSurjective(String),
    #[error("control evaluated at negative argument {0}")]
    Domain(f64),
    #[error("invalid control: {0}")]
    InvalidControl(String),
    #[error("control is not proper: it never exceeds {level}, so its transpose is infinite from there on")]
    Improper { level: f64 },
    #[error("precondition `{bound}` failed: {detail}")]
    Precondition { bound: String, detail: String },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
