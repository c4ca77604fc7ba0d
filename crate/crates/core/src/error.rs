use thiserror::Error;

pub type Result<T> = std::result::Result<T, IdaError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdaError {
    #[error("no inverse of zero")]
    NoInverse,

    #[error("unsupported field width {0} (expected 4, 8 or 16)")]
    UnsupportedWidth(u32),

    #[error("element {value:#x} out of range for GF(2^{width})")]
    ElementOutOfRange { value: u32, width: u32 },

    #[error("matrices are defined over different fields")]
    FieldMismatch,

    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },

    #[error("system is rank deficient (column rank {rank} of {cols})")]
    RankDeficient { rank: usize, cols: usize },

    #[error("system is inconsistent")]
    Inconsistent,

    #[error("invalid index list: {0}")]
    InvalidIndices(String),

    #[error("no dependent columns")]
    NoDependentColumns,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid generator matrix: {0}")]
    InvalidGenerator(String),

    #[error("matrix is not MDS: columns {columns:?} are singular")]
    NotMds { columns: Vec<usize> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("insufficient pieces (have {have}, need {need})")]
    InsufficientPieces { have: usize, need: usize },

    #[error("piece header mismatch in field `{field}`")]
    HeaderMismatch { field: &'static str },

    #[error("checksum mismatch in piece {piece}")]
    Checksum { piece: usize },

    #[error("duplicate piece index {index}")]
    DuplicatePiece { index: usize },

    #[error("piece index {index} out of range for n = {n}")]
    PieceIndexOutOfRange { index: usize, n: usize },

    #[error("{have} pieces is not fewer than m = {m}; use full reconstruction")]
    TooManyPieces { have: usize, m: usize },

    #[error("payload length mismatch: expected {expected} symbols, got {got}")]
    PayloadLength { expected: usize, got: usize },

    #[error("malformed piece: {0}")]
    MalformedPiece(String),
}
