use thiserror::Error;

/// Failures that stop an operation before any law can be checked.
///
/// Law violations are never errors: they are returned as report entries so a
/// caller can inspect every witness. These variants cover malformed input,
/// unmet preconditions and exhausted resource budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("duplicate {kind} `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("partition error: {0}")]
    Partition(String),

    #[error("marginal mismatch: {0}")]
    MarginalMismatch(String),

    #[error("sign-incoherent middle component {component}: an explicit refinement table is required")]
    SignIncoherent { component: u32 },

    #[error("partitions mix signs; interval overlap is undefined")]
    MixedSigns,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),

    #[error("enumeration budget of {budget} steps exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("missing fingerprint for base object `{0}`")]
    MissingFingerprint(String),

    #[error("formal multiplicity {coefficient} on component {component} cannot be evaluated")]
    FormalMultiplicity { component: u32, coefficient: i64 },

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
