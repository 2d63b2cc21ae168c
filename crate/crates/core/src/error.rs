use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix has {rows} rows but only {cols} columns; ROCN matrices need m <= n")]
    TooManyRows { rows: usize, cols: usize },

    #[error("row {0} is identically zero")]
    ZeroRow(usize),

    #[error(
        "not an ROCN matrix: row orthogonality residual {row_residual:e}, \
         column normalization residual {column_residual:e} (tolerance {tolerance:e})"
    )]
    NotRocn {
        row_residual: f64,
        column_residual: f64,
        tolerance: f64,
    },

    #[error("invalid row norms: {0}")]
    InvalidRowNorms(String),

    #[error(
        "{rows} rows exceed the exhaustive search limit of {limit}; \
         use the Epping bound as an estimate instead"
    )]
    SearchTooLarge { rows: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not a Hadamard matrix: entry ({row}, {col}) is {value}, expected +1 or -1")]
    NotSign { row: usize, col: usize, value: i64 },

    #[error("not a Hadamard matrix: rows {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("observable {index} of {party} is not a Hermitian involution (residual {residual:e})")]
    NotInvolution {
        party: &'static str,
        index: usize,
        residual: f64,
    },

    #[error("expectation value has imaginary part {0:e}; observables are not Hermitian")]
    ComplexExpectation(f64),

    #[error("no counterexample exists: M has full column rank and the self-testing criterion applies")]
    FullColumnRank,

    #[error("Gram matrix G(alpha) is not positive definite (smallest eigenvalue {0:e}); need |alpha| < 1/||S||")]
    NotPositiveDefinite(f64),

    #[error("twin construction mismatch: sign-flip and partial-transpose routes differ by {0:e}")]
    TwinMismatch(f64),
}
