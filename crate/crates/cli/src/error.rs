use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// A check ran and failed; the report has been written.
    #[error("verification failed: {0}")]
    Verification(String),

    /// A supplied catalog is not a valid MUB set.
    #[error("catalog rejected: {0}")]
    Catalog(String),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read {path}: {reason}")]
    Read { path: PathBuf, reason: String },

    #[error(transparent)]
    Core(#[from] mublab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use mublab_core::Error as E;
        match self {
            // Unreadable inputs and unwritable outputs are configuration errors.
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write { .. } => EXIT_USAGE,
            CliError::Core(
                E::InvalidConfig(_)
                | E::UnknownLabel(_)
                | E::InvalidLabel { .. }
                | E::RepeatedBasis(_)
                | E::BasisCount { .. }
                | E::UnsupportedDimension(_)
                | E::DimensionMismatch { .. },
            ) => EXIT_USAGE,
            _ => EXIT_VERIFICATION,
        }
    }
}
