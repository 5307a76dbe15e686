use skp_core::SkpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("verification failed: {0} check(s) red")]
    Verify(usize),

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    /// Attach the parameters that produced `e`. Bad inputs stay config
    /// errors, everything else is a domain error.
    pub fn at(e: SkpError, context: String) -> Self {
        match e {
            SkpError::InvalidParameter(_) => CliError::Config(format!("{context}: {e}")),
            _ => CliError::Domain(format!("{context}: {e}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
