use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("loop at vertex {0} is not allowed")]
    Loop(usize),

    #[error("{what} = {value} is outside the supported range {range}")]
    Range {
        what: &'static str,
        value: usize,
        range: &'static str,
    },

    #[error("input is not a tree: {0}")]
    NotATree(String),

    #[error("input graph is disconnected")]
    Disconnected,

    #[error("invalid force record: {0}")]
    Certificate(String),

    #[error("polynomial domain or order mismatch: {0}")]
    Mismatch(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
