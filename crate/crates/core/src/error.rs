use thiserror::Error;

/// Errors raised by the algebra, the solvers and the rating pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row and one column")]
    Empty,

    #[error("entry ({row}, {col}) = {value} is not a finite nonnegative number")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({row}, {col}) = {value} must be strictly positive")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("operation requires a nonzero matrix")]
    ZeroMatrix,

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("matrix has an all-zero {kind} at index {index}")]
    ZeroLine { kind: &'static str, index: usize },

    #[error("divergent closure: spectral radius {radius} exceeds 1")]
    DivergentClosure { radius: f64 },

    #[error("degenerate spectrum: the matrix has no cycle of positive weight")]
    DegenerateSpectrum,

    #[error("the most-differentiating search requires a strictly positive generator matrix")]
    NonPositiveGenerators,

    #[error("enumeration cap exceeded: {required} candidate matrices, cap is {cap}")]
    EnumerationCapExceeded { cap: u64, required: u128 },

    #[error("entries ({row}, {col}) and ({col}, {row}) are not reciprocal: product is {product}")]
    NotReciprocal {
        row: usize,
        col: usize,
        product: f64,
    },

    #[error("diagonal entry ({index}, {index}) = {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: f64 },

    #[error("invalid tolerance: need 0 < rel_eq ({rel_eq}) < tie_rel ({tie_rel}) < 1")]
    InvalidTolerance { rel_eq: f64, tie_rel: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for rejected inputs, false for failures of the solvers on
    /// otherwise well-formed data.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::DivergentClosure { .. }
                | Error::DegenerateSpectrum
                | Error::NonPositiveGenerators
                | Error::EnumerationCapExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
