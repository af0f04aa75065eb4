use thiserror::Error;

/// Every failure the library can report.
///
/// Geometry variants name the offending facet or vertex indices so that a
/// malformed input can be fixed without re-running under a debugger. The
/// "bug" variants (`NotRational`, `ClaimViolated`, ...) indicate an internal
/// inconsistency in the lattice computations rather than bad input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cyclotomic order {order} exceeds the configured cap {cap}")]
    OrderTooLarge { order: u64, cap: u64 },
    #[error("element is not rational")]
    NotRational,
    #[error("division by zero")]
    DivisionByZero,

    #[error("polytope is not simple: point {point} is tight on facets {facets:?}")]
    NotSimple { point: String, facets: Vec<usize> },
    #[error("polytope is not integral: vertex {point} on facets {facets:?}")]
    NotIntegral { point: String, facets: Vec<usize> },
    #[error("facet normals {0:?} are not primitive")]
    NotPrimitive(Vec<usize>),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("facets {0:?} are redundant")]
    Redundant(Vec<usize>),
    #[error("supplied vertices do not match the H-representation")]
    VertexMismatch,
    #[error(
        "polarizing vector is not generic: pairing with edge {edge} at vertex {vertex} is zero"
    )]
    NonGeneric { vertex: usize, edge: usize },
    #[error("weighted polar decomposition violated at {0}")]
    DecompositionViolated(String),
    #[error("region too large: {count} candidate lattice points exceed the cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("polytope is not regular: vertex {0} has a nontrivial group")]
    NotRegular(usize),
    #[error("no generic polarizing vector found after {0} attempts")]
    InternalError(usize),

    #[error("P_1 is undefined at the integer {0}")]
    JumpPoint(String),
    #[error("twisted functions require a root of unity different from one")]
    LambdaOne,

    #[error("inclusion map is not injective: {0}")]
    NotInjective(String),
    #[error("partition of the vertex group violated at vertex {0}")]
    PartitionViolated(usize),
    #[error("character claim violated: {0}")]
    ClaimViolated(String),

    #[error("quadrature failed to reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
