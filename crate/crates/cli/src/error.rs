use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error("trajectory {path}: {message}")]
    Csv { path: String, message: String },

    #[error("integration blew up at step {step}; last good tau = {last_good_tau}")]
    NonFinite { step: usize, last_good_tau: f64 },

    #[error(transparent)]
    Core(#[from] poincare_core::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Csv { .. } => 2,
            CliError::NonFinite { .. } => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
