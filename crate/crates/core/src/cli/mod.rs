//! Config-driven runs: parse a JSON description, execute one command, write
//! CSV/JSON artifacts plus a checksummed manifest.

mod check;
mod config;
mod run;

use std::path::PathBuf;

pub use check::{run_check_suites, SuiteResult};
pub use config::{
    parse_config, Command, Grid, RunConfig, TimeMode, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV,
};
pub use run::{run, sha256_hex, RunOutcome};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),

    #[error("check failed for suites: {}", .0.join(", "))]
    CheckFailed(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(path: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.to_string(),
            message: message.into(),
        }
    }

    /// Process exit status: 2 config, 3 numerical, 4 failed check, 1 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::CheckFailed(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::config("x", "bad").exit_code(), 2);
        assert_eq!(
            CliError::Numerical(crate::Error::NonFinite("v".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::CheckFailed(vec!["skew (seed 1)".into()]).exit_code(),
            4
        );
    }
}
