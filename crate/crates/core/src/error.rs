use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("graph size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty vertex set")]
    EmptySet,

    #[error("tuple entries must be pairwise distinct (vertex {0} repeated)")]
    RepeatedVertex(usize),

    #[error("tuples overlap at vertex {0}")]
    OverlappingTuples(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has no edges")]
    Edgeless,

    #[error("subset enumeration cap exceeded: {size} vertices > cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("graph on {n} vertices is outside the domain n >= m + 2 = {}", .m + 2)]
    TooFewVertices { n: usize, m: usize },

    #[error("exact search supports at most {max} vertices, got {n}")]
    SearchTooLarge { n: usize, max: usize },

    #[error("deterministic graph is not a subgraph of the union graph (edge {{{0}, {1}}})")]
    NotASubgraph(usize, usize),

    #[error(
        "bracket does not straddle 1/2: rate {rate_lo} at p = {p_lo}, rate {rate_hi} at p = {p_hi}"
    )]
    NonStraddling {
        p_lo: f64,
        p_hi: f64,
        rate_lo: f64,
        rate_hi: f64,
    },

    #[error("timeout rate of at least {rate} at p = {p} exceeds the allowed {limit}")]
    ExcessiveTimeouts { p: f64, rate: f64, limit: f64 },

    #[error("degenerate regression input: {0}")]
    DegenerateFit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable snake-case name of the variant, for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::LoopEdge(_) => "loop_edge",
            Error::DuplicateEdge(..) => "duplicate_edge",
            Error::SizeMismatch(..) => "size_mismatch",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::EmptySet => "empty_set",
            Error::RepeatedVertex(_) => "repeated_vertex",
            Error::OverlappingTuples(_) => "overlapping_tuples",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Edgeless => "edgeless",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::TooFewVertices { .. } => "too_few_vertices",
            Error::SearchTooLarge { .. } => "search_too_large",
            Error::NotASubgraph(..) => "not_a_subgraph",
            Error::NonStraddling { .. } => "non_straddling",
            Error::ExcessiveTimeouts { .. } => "excessive_timeouts",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
