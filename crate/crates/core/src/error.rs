use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("number of modes must be even and positive, got {0}")]
    OddSize(usize),

    #[error("hopping matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("pairing matrix is not antisymmetric (max deviation {deviation:e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("matrix is not orthogonal (max |Q·Qᵀ − I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("real Schur block {value} is not within tolerance of ±1")]
    UnpairedRealEigenvalue { value: f64 },

    #[error("real Schur decomposition did not converge")]
    SchurFailed,

    #[error("orthogonal matrix has determinant −1; no real logarithm exists")]
    NegativeDeterminant,

    #[error("orthogonal matrix has an eigenvalue within tolerance of −1 (angle {angle})")]
    AngleAtBranchCut { angle: f64 },

    #[error("pairing matrix undefined: −1 has multiplicity {multiplicity} in Sp(T)")]
    GNotDefined { multiplicity: usize },

    #[error("T + I is ill-conditioned (smallest singular value {min_singular:e})")]
    IllConditioned { min_singular: f64 },

    #[error("coupling matrix is singular (smallest singular value {min_singular:e})")]
    SingularCoupling { min_singular: f64 },

    #[error("det(Tᵀ·T̃) = −1: the angle-product form does not apply (fidelity is 0)")]
    NegativeRelativeDeterminant,

    #[error("T(λ) is not special orthogonal at λ = {lambda}")]
    NonSpecialOrthogonal { lambda: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("Fock-space oracle supports at most {max} modes, got {modes}")]
    TooLarge { modes: usize, max: usize },

    #[error("invalid sweep configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("could not parse records: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn shape(rows: usize, cols: usize) -> String {
    format!("{rows}×{cols}")
}
