use thiserror::Error;

/// Errors raised by graph construction, factorization and the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed skeleton: {0}")]
    MalformedSkeleton(String),
    #[error("source violation: vertex {vertex} receives no edge of color {color}")]
    SourceViolation { vertex: String, color: usize },
    #[error("factorization error: {0}")]
    FactorizationError(String),
    #[error("square presentations of rank {0} are not supported (rank must be 1 or 2)")]
    RankUnsupported(usize),
    #[error("unknown vertex {0}")]
    InvalidVertex(String),
    #[error("degree {found} does not have rank {expected}")]
    RankMismatch { expected: usize, found: String },
    #[error("morphisms are not composable: s(λ) = {left_source} but r(μ) = {right_range}")]
    NotComposable { left_source: String, right_range: String },
    #[error("degree mismatch: {m} + {n} ≠ {degree}")]
    DegreeMismatch { m: String, n: String, degree: String },
    #[error("degree order violation: {m} ≰ {n}")]
    DegreeOrderViolation { m: String, n: String },
    #[error("window overflow: the square for ({0}, {1}) lies outside the materialized window")]
    WindowOverflow(String, String),
    #[error("isomorphism search budget exceeded after {explored} nodes (budget {budget})")]
    SearchBudgetExceeded { explored: u64, budget: u64 },
    #[error("cocycle is not functorial on the square {0}")]
    NonFunctorialCocycle(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("action is not free: {0}")]
    NonFreeAction(String),
    #[error("action is incompatible with the graph structure: {0}")]
    IncompatibleAction(String),
    #[error("vertex sets differ: {0}")]
    VertexSetMismatch(String),
    #[error("vertex matrices do not commute")]
    NonCommutingMatrices,
    #[error("invalid square bijection: {0}")]
    InvalidTheta(String),
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("monomial s_λ s_μ^* requires s(λ) = s(μ), got {0} and {1}")]
    SourceMismatch(String, String),
    #[error("refinement target {target} is below monomial degree {degree}")]
    DegreeTooSmall { target: String, degree: String },
    #[error("grading hypothesis d(λ) = b(s(λ)) − b(r(λ)) fails on edge {0}")]
    GradingHypothesisViolated(String),
    #[error("invalid path descriptor: {0}")]
    InvalidPath(String),
    #[error("invalid expression: {0}")]
    Expression(String),
    #[error("line {line}: syntax error: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: unknown name {name}")]
    UnknownName { line: usize, name: String },
    #[error("line {line}: duplicate declaration of {name}")]
    DuplicateDeclaration { line: usize, name: String },
    #[error("matrix-unit law violated: {0}")]
    MatrixUnitViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
