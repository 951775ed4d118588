use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined order: n = {0} is negative")]
    UndefinedOrder(i64),
    #[error("singular parameter: denominator vanishes at term {0}")]
    SingularParameter(usize),
    #[error("non-terminating series")]
    NonTerminating,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field not in table: q = {0}")]
    FieldNotInTable(u64),
    #[error("index ({0}, {1}) outside the domain")]
    OutOfDomain(i64, i64),
    #[error("singular coefficient: {0}")]
    SingularCoefficient(String),
    #[error("recurrence degenerate at ({0}, {1})")]
    RecurrenceDegenerate(i64, i64),
    #[error("axiom ({axiom}) fails: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("malformed scheme file: {0}")]
    Format(String),
    #[error("size guard: {0}")]
    TooLarge(String),
}
