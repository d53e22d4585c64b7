use thiserror::Error;

/// Errors raised by matrix validation and by ill-posed quantum quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("vectors are not orthonormal (residual {0:e})")]
    NotOrthonormal(f64),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("ill-posed: {0}")]
    IllPosed(String),

    #[error("support of the first argument is not contained in the support of the second")]
    SupportViolation,

    #[error("trace has imaginary residue {imag:e} (real part {real})")]
    ImaginaryResidue { real: f64, imag: f64 },

    #[error("evaluation failed at parameter {at}: {source}")]
    Evaluation { at: f64, source: Box<Error> },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
