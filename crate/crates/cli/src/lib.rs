//! The `cogrowth` command line: series expansion, walk enumeration, growth constants,
//! limit-law reports, recurrence guessing and the verification suite.

pub mod commands;
pub mod compute;
pub mod output;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

macro_rules! compute_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Compute(e.to_string())
            }
        })*
    };
}

compute_error!(
    cogrowth_oracle::OracleError,
    cogrowth_series::SeriesError,
    cogrowth_system::SystemError,
    cogrowth_algebraic::AlgebraicError,
    cogrowth_asymptotics::AsymptoticsError
);

impl From<cogrowth_group::GroupError> for CliError {
    fn from(e: cogrowth_group::GroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}
