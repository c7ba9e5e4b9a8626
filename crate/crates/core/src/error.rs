use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("base categories differ: {0}")]
    BaseMismatch(String),
    #[error("base is not a signature category: {0}")]
    BaseShape(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("missing arity: {0}")]
    MissingArity(String),
    #[error("formula has the wrong shape: {0}")]
    ShapeError(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("not a natural transformation: {0}")]
    NotNatural(String),
    #[error("interpretation leaves its domain: {0}")]
    Containment(String),
    #[error("promise violated: {0}")]
    Promise(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
