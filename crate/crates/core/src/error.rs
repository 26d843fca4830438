use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("multiplication is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("generators close to more than {cap} elements")]
    GeneratorClosureOverflow { cap: usize },
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not a homomorphism: f({0}*{1}) != f({0})*f({1})")]
    NotAHomomorphism(usize, usize),
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("actions do not commute at point {point}")]
    ActionsDoNotCommute { point: usize },
    #[error("left action is not free: {element} fixes {point}")]
    LeftActionNotFree { element: usize, point: usize },
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("objects live over different groups")]
    GroupMismatch,
    #[error("maps do not share a target")]
    TargetMismatch,
    #[error("feet do not match")]
    FeetMismatch,
    #[error("matrix bridge needs the trivial group")]
    NontrivialGroup,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry {0} is outside the semiring carrier")]
    EntryOutOfCarrier(usize),
    #[error("semiring axiom fails: {0}")]
    SemiringAxiom(String),

    #[error("span cannot be factored through the stored generators: {0}")]
    UnfactorableSpan(String),

    #[error("functor table fails pce checks: {0}")]
    PceViolation(String),
    #[error("reconstructed left action is not free: {0}")]
    FreenessFailure(String),
    #[error("acting group is incompatible with the ambient structure: {0}")]
    ActionIncompatible(String),
    #[error("map is not an epimorphism")]
    NotEpi,
    #[error("map does not start at the canonical biset")]
    WrongSource,
    #[error("corpus too large: {0}")]
    CorpusOverflow(String),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("ingressive leg is not a discrete fibration: {0}")]
    IngressiveNotFibration(String),

    #[error("operad axiom {name} fails at {witness}")]
    AxiomViolation { name: String, witness: String },
    #[error("arity {arity} exceeds the bound {max}")]
    ArityOverflow { arity: usize, max: usize },

    #[error("malformed input: {0}")]
    MalformedInput(String),
}
