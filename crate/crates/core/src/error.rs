use thiserror::Error;

/// Failure to read a presentation file or a word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("the first directive must be `gens:`")]
    MissingGenerators,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("left-hand side is empty")]
    EmptyLhs,
    #[error("exponent of `{symbol}` is negative at n = {n}")]
    NegativeExponent { symbol: String, n: i64 },
    #[error("exponent `n` used outside a rule template")]
    ParameterOutsideTemplate,
    #[error("order must list every generator exactly once")]
    IncompleteOrder,
    #[error("template range {lo}..{hi} is empty")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("`{0}:` directive is not allowed here")]
    UnexpectedDirective(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("normal form computation exceeded {0} steps")]
    StepBudgetExceeded(usize),
    #[error("the rewriting system has not been verified complete")]
    NotVerifiedComplete,
    #[error("rule index {0} is out of range")]
    RuleIndex(usize),
    #[error("rule {rule} applies to no cyclic conjugate of the word")]
    RuleDoesNotApply { rule: usize },
    #[error("the empty word has no prefixes or suffixes")]
    EmptyWord,
    #[error("invalid limit: {0}")]
    InvalidLimit(String),
    #[error("invalid added reduction: {0}")]
    InvalidAugmentation(String),
    #[error("the system is not length non-increasing")]
    LengthIncreasing,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
