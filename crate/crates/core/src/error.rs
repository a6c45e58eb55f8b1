use thiserror::Error;

/// Largest order supported by the one-word-per-row adjacency layout.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {requested} exceeds the supported maximum of {max}")]
    Capacity { requested: usize, max: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("invalid parameters for {family}: {reason}")]
    InvalidFamily { family: &'static str, reason: String },
    #[error("graph6 format error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("spectrum domain error: {0}")]
    Domain(String),
    #[error("spectrum parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("descriptor parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },
    #[error("oracle target {0} could not be resolved to a graph")]
    Unresolved(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("certificate evaluates to spectrum {found}, expected {expected}")]
    SpectrumMismatch { expected: String, found: String },
    #[error("certificate evaluates to a graph whose spectrum is not integral")]
    NotIntegral,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("order {order} exceeds the enumeration budget {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("target has {size} values but order {order} was requested")]
    TargetSize { size: usize, order: usize },
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O error: {0}")]
    Io(#[from] std::io::Error),
}
