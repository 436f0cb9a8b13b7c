use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid signal `{signal}`: {reason}")]
    InvalidSignal { signal: String, reason: String },

    #[error("conditioning on null message `{0}`")]
    NullMessage(String),

    #[error("signals are defined over different state sets")]
    StateMismatch,

    #[error("binary-action operation requires exactly 2 actions, found {0}")]
    NotBinary(usize),

    #[error("payoffs are not diagonal: {0}")]
    NotDiagonal(String),

    #[error("signal `{0}` is not simple (not a partition of the states)")]
    NotSimple(String),

    #[error("problem has states without a unique optimal action; construction refused")]
    DegenerateProblem,

    #[error("instance too large for oracle: {0}")]
    TooLarge(String),

    #[error("infeasible at this resolution (grid 1/{grid}, {max_messages} messages)")]
    Infeasible { grid: u32, max_messages: usize },

    #[error("problem is outside the lower-triangular family: {0}")]
    OutsideFamily(String),

    #[error("invalid type space: {0}")]
    InvalidTypeSpace(String),

    #[error("menu has no item for type `{0}`")]
    MissingItem(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
