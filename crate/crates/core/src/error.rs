use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("relation contains a cycle through `{0}`")]
    CycleDetected(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("element id {0} is out of range")]
    UnknownElement(usize),

    #[error("isomorphism search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("size mismatch: {0} vs {1} elements")]
    SizeMismatch(usize, usize),

    #[error("gadget failed property `{property}`: {detail}")]
    GadgetInvalid { property: String, detail: String },

    #[error("no gadget found within a budget of {0} candidates")]
    NotFound(u64),

    #[error("element set is not an antichain")]
    NotAntichain,

    #[error("invalid seam fold: {0}")]
    InvalidSeamFold(String),

    #[error("poset is not graded by its rank function")]
    NotGraded,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad identification: {0}")]
    BadIdentification(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn gadget(property: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::GadgetInvalid {
            property: property.into(),
            detail: detail.into(),
        }
    }
}
