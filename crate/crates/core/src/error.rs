use thiserror::Error;

/// Errors raised by table construction, the engines and the reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimensions ({r}, {c}, {h}): every size must be at least 1")]
    InvalidDims { r: usize, c: usize, h: usize },

    #[error("shape mismatch for {what}: expected {expected}, found {found}")]
    Shape { what: &'static str, expected: String, found: String },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("entry ({i}, {j}, {k}) is outside dims ({r}, {c}, {h})")]
    IndexOutOfRange { i: usize, j: usize, k: usize, r: usize, c: usize, h: usize },

    #[error("integer overflow while summing {0}")]
    Overflow(&'static str),

    #[error("negative entry in {0}")]
    Negative(&'static str),

    #[error("{0} must be 0/1-valued")]
    NotBinary(&'static str),

    #[error("matrix must be square, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("marginals are inconsistent ({violations} violated agreement equations)")]
    Inconsistent { violations: usize },

    #[error("1-marginals are inconsistent: totals {0}, {1}, {2}")]
    InconsistentOneMarginals(u64, u64, u64),

    #[error("layer {layer}: bound total {bound} is below the required layer sum {required}")]
    NegativeMarginal { layer: usize, bound: u64, required: u64 },

    #[error("invalid axis map: {0}")]
    InvalidAxisMap(String),

    #[error("array violates the upper bound at ({i}, {j}, {k})")]
    BoundViolation { i: usize, j: usize, k: usize },

    #[error("array does not match the prescribed marginals: {0}")]
    MarginalViolation(String),

    #[error("enumeration limit exceeded after {nodes} search nodes")]
    LimitExceeded { nodes: u64 },

    #[error("state space needs {required} states, above the cap of {cap}")]
    CapExceeded { required: u128, cap: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
