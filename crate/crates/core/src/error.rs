use thiserror::Error;

/// Errors produced by field construction, sieving, residue computation and
/// report generation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("splitting of p = {p} is unverified (p divides the index of the defining polynomial)")]
    UnverifiedSplitting { p: u64 },

    #[error("sieve bound {requested} exceeds the configured ceiling {ceiling}")]
    Resource { requested: u64, ceiling: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("residue must be positive, got {0}")]
    NonPositiveResidue(f64),

    #[error(
        "residue routes disagree for discriminant {discriminant}: \
         character sum {character_sum}, class number formula {class_formula}"
    )]
    ResidueMismatch {
        discriminant: i64,
        character_sum: f64,
        class_formula: f64,
    },

    #[error("class number for discriminant {discriminant} is not integral: {value}")]
    NonIntegralClassNumber { discriminant: i64, value: f64 },

    #[error("no residue available for field {0}; supply one in the residue table")]
    MissingResidue(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
