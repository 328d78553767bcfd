use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the input
/// was well-typed but violates a precondition of the requested operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quadratic form is indefinite")]
    Indefinite,
    #[error("quadratic form is not positive definite")]
    NotDefinite,
    #[error("quadratic form has rank {rank} < {dim}; split off the null block with `split_off_null` first")]
    RankDeficient { rank: usize, dim: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not stable: vertex {vertex} has weight 0 and valence {valence}")]
    Unstable { vertex: usize, valence: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("size guard exceeded: {what} is {value}, limit {limit}")]
    SizeGuard { what: &'static str, value: usize, limit: usize },
    #[error("malformed edge path: {0}")]
    MalformedPath(String),
    #[error("basepoint mismatch: petal {petal} is not a loop at vertex {basepoint}")]
    BasepointMismatch { petal: usize, basepoint: usize },
    #[error("genus mismatch: {petals} petals for a graph of genus {genus}")]
    GenusMismatch { petals: usize, genus: usize },
    #[error("petals do not define a homotopy equivalence")]
    InvalidMarking,
    #[error("invalid Nielsen move: {0}")]
    InvalidMove(String),
    #[error("markings live on different graphs")]
    GraphMismatch,
    #[error("edge {0} is a virtual loop and cannot be contracted")]
    VirtualEdge(usize),
    #[error("length of edge {0} must be strictly positive")]
    NonPositiveLength(usize),
    #[error("zero generator at position {0}")]
    ZeroGenerator(usize),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("cell budget of {0} exceeded while closing an orbit")]
    CellBudget(usize),
    #[error("orbit did not stabilize within {0} steps")]
    OrbitBound(usize),
    #[error("no cell of the fan matches: {0}")]
    NoMatchingCell(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Indefinite => "indefinite",
            Error::NotDefinite => "not_definite",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::NotSymmetric => "not_symmetric",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Disconnected => "disconnected",
            Error::Unstable { .. } => "unstable",
            Error::UnknownEdge(_) => "unknown_edge",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::SizeGuard { .. } => "size_guard",
            Error::MalformedPath(_) => "malformed_path",
            Error::BasepointMismatch { .. } => "basepoint_mismatch",
            Error::GenusMismatch { .. } => "genus_mismatch",
            Error::InvalidMarking => "invalid_marking",
            Error::InvalidMove(_) => "invalid_move",
            Error::GraphMismatch => "graph_mismatch",
            Error::VirtualEdge(_) => "virtual_edge",
            Error::NonPositiveLength(_) => "non_positive_length",
            Error::ZeroGenerator(_) => "zero_generator",
            Error::InvalidAction(_) => "invalid_action",
            Error::CellBudget(_) => "cell_budget",
            Error::OrbitBound(_) => "orbit_bound",
            Error::NoMatchingCell(_) => "no_matching_cell",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
