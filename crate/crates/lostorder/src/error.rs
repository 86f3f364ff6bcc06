use lostorder_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    /// 1 verification failure, 2 usage error, 3 size guard.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::SizeGuard { .. }) => 3,
            CliError::Core(CoreError::OutOfRange { .. } | CoreError::InvalidSchmidt(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
