use thiserror::Error;

/// Coarse classification used by front-ends to pick an exit code:
/// `Validation` means the input object itself is malformed or violates a
/// type invariant, `Precondition` means the objects are fine but the
/// requested operation is not applicable to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Precondition,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("number of variables mismatch: {left} vs {right}")]
    NumVarsMismatch { left: usize, right: usize },
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("multi-index of degree {degree} exceeds truncation order {order}")]
    IndexAboveOrder { degree: usize, order: usize },
    #[error("component {component} carries a constant term; jets are stored in displacement coordinates")]
    ConstantTermPresent { component: usize },
    #[error("chained jets do not match: inner target point differs from outer source point")]
    PointMismatch,
    #[error("operation requires a uniform truncation order, got per-component orders")]
    AnisotropicUnsupported,
    #[error("linear part is singular: not a local diffeomorphism at this order")]
    SingularLinearPart,
    #[error("operation needs order at least {needed}, jet carries order {got}")]
    InsufficientOrder { needed: usize, got: usize },
    #[error("requested order {requested} exceeds current order {current}")]
    OrderExceeds { requested: usize, current: usize },
    #[error("transcendental function `{0}` is unavailable in exact rational mode")]
    TranscendentalInExactMode(&'static str),
    #[error("evaluation singularity: {0}")]
    EvaluationSingularity(String),
    #[error("multiorder has {got} entries, multifoliation has {expected} groups")]
    MultiOrderLenMismatch { expected: usize, got: usize },
    #[error("invalid multifoliation: {0}")]
    InvalidMultifoliation(String),
    #[error("jets modulo different multifoliations are not comparable")]
    FoliationMismatch,
    #[error("jets with different multiorders are not comparable")]
    MultiOrderMismatch,
    #[error("multiorder entry {index}: requested order {requested} exceeds current order {current}")]
    MultiOrderExceeds {
        index: usize,
        requested: usize,
        current: usize,
    },
    #[error("(R,S,Q) orders must satisfy R <= S and R <= Q: got R={r}, S={s}, Q={q}")]
    RsqOrderViolation { r: usize, s: usize, q: usize },
    #[error("morphism is not fibered: base component {component} depends on fiber variable {variable}")]
    NotFibered { component: usize, variable: usize },
    #[error("iterated tangent order mismatch: {left} vs {right}")]
    TangentOrderMismatch { left: usize, right: usize },
    #[error("base points differ")]
    BasePointMismatch,
    #[error("level {level} is out of range for order {order}")]
    LevelOutOfRange { level: usize, order: usize },
    #[error("vectors disagree outside level {level}; level addition is undefined")]
    BlockDisagreement { level: usize },
    #[error("not a quasijet: {0}")]
    NotAQuasijet(String),
    #[error("quasijet is not in the nonholonomic subset")]
    NotNonholonomic,
    #[error("blocks are not holonomic-consistent")]
    NotHolonomic,
    #[error("subset E must be non-empty")]
    EmptySubset,
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("transversality needs at least two maps, got {0}")]
    DeltaTooSmall(usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("coordinate map p must be surjective onto the poset")]
    NotSurjective,
    #[error("jet of order 0 carries no Jacobian")]
    JetOrderZero,
    #[error("matrix shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid Weil algebra: {0}")]
    InvalidWeilAlgebra(String),
    #[error("numeric conversion overflowed")]
    NumericOverflow,
}

impl JetError {
    pub fn class(&self) -> ErrorClass {
        use JetError::*;
        match self {
            IndexAboveOrder { .. }
            | ConstantTermPresent { .. }
            | InvalidMultifoliation(_)
            | InvalidPoset(_)
            | NotSurjective
            | InvalidWeilAlgebra(_)
            | ShapeMismatch { .. }
            | NumericOverflow => ErrorClass::Validation,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, JetError>;
