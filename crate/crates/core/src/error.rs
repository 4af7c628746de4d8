use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an admissible prime (need 3 < p < 2^32)")]
    BadPrime(u64),
    #[error("linear system is infeasible: {0}")]
    Infeasible(String),
    #[error("solution of {what} is not unique (kernel dimension {dim})")]
    NonUnique { what: &'static str, dim: usize },
    #[error("only {found} admissible points found, {wanted} requested (prime too small?)")]
    Exhausted { wanted: usize, found: usize },
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("curve is declared hyperelliptic; the canonical map is not an embedding")]
    HyperellipticInput,
    #[error("Sym^2 H^0(omega) -> H^0(omega^2) has rank {found}, expected {expected}")]
    SurjectivityFail { expected: usize, found: usize },
    #[error("span of {what} has dimension {found}, expected {expected}")]
    RankFail {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("Clifford-index gate: {0}")]
    CliffGate(String),
    #[error("contraction check failed: {0}")]
    ContractionFail(String),
    #[error("hyperplane-section check failed: {0}")]
    SectionFail(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("certificate failed: {0}")]
    CertificateFail(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors that report a violated theorem hypothesis or a
    /// non-generic input rather than an internal inconsistency.
    pub fn is_hypothesis_gate(&self) -> bool {
        matches!(
            self,
            Error::HyperellipticInput
                | Error::CliffGate(_)
                | Error::SurjectivityFail { .. }
                | Error::DimensionMismatch { .. }
                | Error::Exhausted { .. }
                | Error::ContractionFail(_)
                | Error::SectionFail(_)
                | Error::Unsupported(_)
        )
    }
}
