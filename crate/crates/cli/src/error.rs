use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{0}")]
    Core(#[from] wahl_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const GATE: i32 = 1;
    pub const CERTIFICATE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const PARSE: i32 = 65;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use wahl_core::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Parse { .. } | CliError::Io(_) => exit::PARSE,
            CliError::Core(E::InvalidCurve(_)) => exit::PARSE,
            CliError::Core(E::BadPrime(_) | E::BadInput(_)) => exit::USAGE,
            CliError::Core(e) if e.is_hypothesis_gate() => exit::GATE,
            CliError::Core(_) => exit::CERTIFICATE,
        }
    }

    /// Stable short name for reports.
    pub fn kind(&self) -> &'static str {
        use wahl_core::Error as E;
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Parse { .. } => "PARSE",
            CliError::Io(_) => "IO",
            CliError::Core(e) => match e {
                E::BadPrime(_) => "BAD_PRIME",
                E::Infeasible(_) => "INFEASIBLE",
                E::NonUnique { .. } => "NON_UNIQUE",
                E::Exhausted { .. } => "EXHAUSTED",
                E::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
                E::HyperellipticInput => "HYPERELLIPTIC_INPUT",
                E::SurjectivityFail { .. } => "SURJECTIVITY_FAIL",
                E::RankFail { .. } => "RANK_FAIL",
                E::CliffGate(_) => "CLIFF_GATE",
                E::ContractionFail(_) => "CONTRACTION_FAIL",
                E::SectionFail(_) => "SECTION_FAIL",
                E::InvalidCurve(_) => "INVALID_CURVE",
                E::BadInput(_) => "BAD_INPUT",
                E::CertificateFail(_) => "CERTIFICATE_FAIL",
                E::Unsupported(_) => "UNSUPPORTED",
            },
        }
    }
}
