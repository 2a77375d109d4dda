use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: item `{item}` carries a quantity in some occurrences but not in others")]
    InconsistentQuantity { line: usize, item: String },

    #[error("input contains no transactions")]
    EmptyInput,

    #[error("unknown item id {0}")]
    UnknownItem(u32),

    #[error("unknown item `{0}`")]
    UnknownItemName(String),

    #[error("itemset must contain at least one item")]
    EmptyItemset,

    #[error("itemset is not strictly increasing")]
    UnorderedItemset,

    #[error("antecedent has zero support")]
    ZeroSupport,

    #[error("invalid threshold `{0}`: expected a value in (0, 1] as decimal, fraction or percentage")]
    InvalidThreshold(String),

    #[error("partial completeness level must exceed 1, got {0}")]
    InvalidCompleteness(String),

    #[error("maximum support must not be below minimum support")]
    MaxBelowMinSupport,

    #[error("brute-force enumeration supports at most {limit} items, database has {actual}")]
    TooManyItems { limit: usize, actual: usize },

    #[error("taxonomy contains a cycle through `{0}`")]
    TaxonomyCycle(String),

    #[error("database item `{0}` has children in the taxonomy; items must be leaves")]
    ItemNotLeaf(String),

    #[error("taxonomy was built for a different item dictionary")]
    TaxonomyMismatch,

    #[error("non-tree taxonomy: `{0}` has more than one parent")]
    NonTreeTaxonomy(String),

    #[error("quantity {quantity} of `{item}` lies outside the observed values")]
    QuantityOutOfRange { item: String, quantity: u64 },

    #[error("invalid partitioning: {0}")]
    InvalidPartitioning(String),

    #[error("quantified item `{0}` has no partitioning")]
    MissingPartitioning(String),

    #[error("statistic not applicable: {0}")]
    NotApplicable(&'static str),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
