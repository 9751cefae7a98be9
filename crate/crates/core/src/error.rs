use thiserror::Error;

/// A violation of the instance invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("unknown vertex `{0}`")]
    UnknownName(String),
    #[error("`{0}` lists `{1}`, which is on the same side")]
    SameSide(String, String),
    #[error("`{0}` lists `{1}` more than once")]
    DuplicateNeighbor(String, String),
    #[error("`{0}` lists `{1}` but `{1}` does not list `{0}`")]
    Asymmetric(String, String),
    #[error("agent `{0}` has an empty preference list")]
    EmptyAgent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `{0}:` header")]
    MissingHeader(&'static str),
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("second preference list for `{0}`")]
    DuplicateList(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// A parse failure, carrying the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: impl Into<ParseErrorKind>) -> Self {
        ParseError { line, kind: kind.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("unknown vertex `{0}`")]
    UnknownName(String),
    #[error("`{0}` and `{1}` are not adjacent")]
    NotAnEdge(String, String),
    #[error("`{0}` is matched more than once")]
    MatchedTwice(String),
    #[error("partner map is not an involution at `{0}`")]
    NotInvolution(String),
    #[error("matching covers {found} vertices, instance has {expected}")]
    WrongSize { expected: usize, found: usize },
}
