use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: malformed FASTA header")]
    MalformedHeader { line: usize },

    #[error("line {line}: sequence data before the first header")]
    MissingHeader { line: usize },

    #[error("line {line}: illegal character '{ch}'")]
    IllegalCharacter { line: usize, ch: char },

    #[error("record '{id}' has no residues")]
    EmptyRecord { id: String },

    #[error("empty alignment")]
    EmptyAlignment,

    #[error("alignment rows have unequal lengths ({expected} vs {found} for '{id}')")]
    RaggedAlignment { id: String, expected: usize, found: usize },

    #[error("alignment rows have unequal lengths ({0} vs {1})")]
    UnequalRows(usize, usize),

    #[error("column {0} is a gap in both rows")]
    GapGapColumn(usize),

    #[error("invalid alignment path: {0}")]
    InvalidPath(String),

    #[error("{what} {index} out of range 1..={max}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("residue '{ch}' of '{id}' is not scored by the substitution matrix")]
    AlphabetMismatch { id: String, ch: char },

    #[error("substitution matrix: {0}")]
    Matrix(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("pairwise table is inconsistent at ({i}, {j}): {reason}")]
    InconsistentPairwise { i: usize, j: usize, reason: String },

    #[error("tables: {0}")]
    Tables(String),

    #[error("sequence mismatch: {0}")]
    SequenceMismatch(String),

    #[error("negative distance {value} at index {index}")]
    NegativeDistance { index: usize, value: f64 },

    #[error("count mismatch: {0} values but {1} weights")]
    CountMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("I/O: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
