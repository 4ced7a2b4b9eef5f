use thiserror::Error;

/// Violations of the network model's structural rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown firm `{0}`")]
    UnknownFirm(String),
    #[error("unknown contract `{0}`")]
    UnknownContract(String),
    #[error("duplicate firm id `{0}`")]
    DuplicateFirm(String),
    #[error("duplicate contract id `{0}`")]
    DuplicateContract(String),
    #[error("contract `{0}` has the same firm as seller and buyer")]
    SelfContract(String),
    #[error("firm `{firm}` was consulted on contract `{contract}`, which it is not party to")]
    ForeignContract { firm: String, contract: String },
    #[error("choice function of firm `{firm}` returned contracts that were not offered")]
    ChoiceNotSubset { firm: String },
    #[error("invalid choice function for firm `{firm}`: {reason}")]
    InvalidChoice { firm: String, reason: String },
}

/// Failures of the solvers and exhaustive searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("deferred acceptance did not reach a fixed point within {limit} rounds")]
    RoundBudgetExceeded { limit: usize },
    #[error("deferred acceptance lost monotonicity in round {round}; some choice function is not fully substitutable")]
    NotMonotone { round: usize },
    #[error("fixed point failed verification: {0}")]
    Unverified(String),
    #[error("search budget exceeded after examining {examined} candidates")]
    BudgetExceeded { examined: u64 },
}

/// Invalid source instances and failed witness translations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("invalid vertex name `{0}`: names must be non-empty and free of ':' and '>'")]
    InvalidVertexName(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate arc `{0}` -> `{1}`")]
    DuplicateArc(String, String),
    #[error("the two parts do not partition the vertex set")]
    NotAPartition,
    #[error("the outcome contains the cross-gadget contract `{0}`")]
    CrossGadgetContract(String),
    #[error("part {0} induces a directed cycle")]
    CyclicPart(&'static str),
    #[error("Partition weights must be positive and at least one weight is required")]
    InvalidWeights,
    #[error("the set is not of the form X_I plus y")]
    NotAWitness,
    #[error("instance of size {size} is above the brute-force cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Reading and writing documents.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: line {line}, column {column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: unsupported schema_version {found} (expected {expected})")]
    SchemaVersion { context: String, found: u32, expected: u32 },
    #[error("{context}: {source}")]
    Model {
        context: String,
        #[source]
        source: ModelError,
    },
}

/// Invalid parameters for the random network generator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("a flow network needs at least 2 firms, got {0}")]
    TooFewFirms(usize),
    #[error("density must lie in [0, 1], got {0}")]
    InvalidDensity(f64),
}
