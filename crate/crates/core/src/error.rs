use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("operation requires a binary word, got alphabet size {0}")]
    NonBinary(u8),
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("symbol {symbol} out of range for alphabet size {alphabet_size}")]
    SymbolOutOfRange { symbol: u8, alphabet_size: u8 },
    #[error("alphabet mismatch: expected at most {expected}, found {found}")]
    AlphabetMismatch { expected: u8, found: u8 },
    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(u8),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
