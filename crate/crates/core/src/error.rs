use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("unsupported axiom combination for operator {0}")]
    UnsupportedAxioms(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("normalization exceeded {limit} steps")]
    NonTermination { limit: usize },

    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),

    #[error("invalid tree export: {0}")]
    Import(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, column, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
