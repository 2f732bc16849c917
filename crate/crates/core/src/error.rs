use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("characteristic polynomial does not split over the Gaussian rationals (unresolved degree {remaining})")]
    NonSplitting { remaining: usize },

    #[error("matrix is not diagonalizable")]
    NotDiagonalizable,

    #[error("operation `{0}` is not supported on the float backend")]
    BackendUnsupported(&'static str),

    #[error("(A1|B1) is singular: the point (inf, inf) lies on the support")]
    PointAtInfinityOnSupport,

    #[error("group element is singular: {0}")]
    SingularGroupElement(&'static str),

    #[error("det M(zeta, eta) vanishes identically")]
    ZeroDeterminant,

    #[error("complex is not a resolution: {0}")]
    NotAResolution(String),

    #[error("entry ({row}, {col}) has bidegree ({dz}, {de}) but the twists allow at most ({max_dz}, {max_de})")]
    BidegreeMismatch {
        row: usize,
        col: usize,
        dz: usize,
        de: usize,
        max_dz: i64,
        max_de: i64,
    },

    #[error("Euler characteristic is not linear in the twist: {0}")]
    NonLinearHilbert(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("flow step rejected at t = {t}: Hamiltonian drift {drift:e} exceeds {tol:e}")]
    StepRejected { t: f64, drift: f64, tol: f64 },

    #[error("X or Y is not conjugate to the leaf data")]
    IncompatibleXY,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error at `{field}`{}: {message}", line_suffix(.line))]
    Schema {
        field: String,
        line: Option<usize>,
        message: String,
    },

    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

fn line_suffix(line: &Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
