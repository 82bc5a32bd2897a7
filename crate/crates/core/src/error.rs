use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Bessel order {0} is below -1/2")]
    OrderOutOfRange(f64),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("modular cannot be bracketed: {0}")]
    NotBracketable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("empirical trend contradicts the weight checker: {0}")]
    InconsistentWithChecker(String),
}
