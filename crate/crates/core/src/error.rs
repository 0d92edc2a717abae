use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    OutOfRangeVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertices {0} and {1} are in different components")]
    Unreachable(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid offspring law: {0}")]
    InvalidLaw(String),
    #[error("invalid degree {0}")]
    InvalidDegree(f64),
    #[error("invalid fixture dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix dimension {dim} exceeds dense cap {cap}; use extreme_eigenvalues")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("Lanczos did not converge after {iterations} iterations (best estimates {estimates:?}, residual bounds {bounds:?})")]
    ConvergenceFailure {
        iterations: usize,
        estimates: Vec<f64>,
        bounds: Vec<f64>,
    },
    #[error("realization specs disagree on family, size or density")]
    MixedSpecs,
    #[error("exact Cheeger constant needs n <= {cap}, got {n}")]
    TooLargeForExact { n: usize, cap: usize },
    #[error("Cheeger inequality violated: {0}")]
    SandwichViolation(String),
    #[error("spectral measure is empty")]
    EmptyMeasure,

    #[error("empty input")]
    EmptyInput,
    #[error("collapse fit needs at least two profiles, got {0}")]
    InsufficientProfiles(usize),

    #[error("mean degree {0} is not supercritical (need d > 1)")]
    SubcriticalDegree(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("edge list parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
