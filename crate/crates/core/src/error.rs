use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    NotPrime(u32),

    #[error("elements live in different ambient algebras")]
    MixedAlgebras,

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("generator `{name}` has degree {actual}, annotation says {annotated}")]
    DegreeAnnotation {
        name: String,
        annotated: u32,
        actual: u32,
    },

    #[error("no table entry for {word} applied to {generator}; supply one via a config entry")]
    MissingTableEntry { word: String, generator: String },

    #[error("operation {op} is not defined at p = {p}")]
    InvalidOperation { op: String, p: u32 },

    #[error("instability violated: {0}")]
    Instability(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("insufficient module data: need degrees 0..={needed}, module known through {known}")]
    InsufficientModuleData { needed: usize, known: usize },

    #[error("invalid module: {0}")]
    Module(String),

    #[error("{0}")]
    Hypothesis(String),

    #[error("morphism image for generator `{generator}` has degree {actual}, expected {expected}")]
    ImageDegree {
        generator: String,
        expected: u32,
        actual: u32,
    },

    #[error("isomorphism search space has {size} candidates, over the budget of {budget}")]
    SearchBudget { size: u128, budget: u128 },

    #[error("psi is not unit-compatible: {0}")]
    NotUnitCompatible(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("config error: {0}")]
    Config(String),
}
