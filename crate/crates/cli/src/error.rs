use thiserror::Error;
use unram_core::certifier::CertifyError;
use unram_core::heisenberg::HeisError;
use unram_core::jacobian::JacobianError;
use unram_core::pairing::PairingError;
use unram_core::specialization::SpecializeError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Refused(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("malformed JSON: {e}"))
    }
}

impl From<HeisError> for CliError {
    fn from(e: HeisError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<JacobianError> for CliError {
    fn from(e: JacobianError) -> Self {
        match e {
            JacobianError::SearchExhausted { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::BudgetExhausted(_) | PairingError::TooManyCombinations(_) => CliError::Budget(e.to_string()),
            PairingError::Jacobian(j) => j.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::NoGoodPrimes { .. } => CliError::Budget(e.to_string()),
            CertifyError::Uncertified(_) => CliError::Refused(e.to_string()),
            CertifyError::Jacobian(j) => j.into(),
            CertifyError::Pairing(p) => p.into(),
            CertifyError::RepresentativeCollision(_) => CliError::Other(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SpecializeError> for CliError {
    fn from(e: SpecializeError) -> Self {
        match e {
            SpecializeError::Degenerate { .. } => CliError::Other(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
