use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid binary expansion: {0}")]
    InvalidExpansion(String),

    #[error("depth {requested} exceeds the configured bound {bound}")]
    DepthExceeded { requested: u32, bound: u32 },

    #[error("malformed problem: {0}")]
    Malformed(String),

    #[error("address conflict at {point}: words {first} and {second} give {first_value} and {second_value}")]
    AddressConflict {
        point: String,
        first: String,
        second: String,
        first_value: String,
        second_value: String,
    },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("probe error: {0}")]
    Probe(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
