//! Error classification for scriptable exit codes.

use std::fmt;

use superres::Error;

/// Every command failure falls into one of three classes, each with a
/// stable exit code: configuration (1), I/O (2), numerical (3).
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Pnm(_) => CliError::Io(e.to_string()),
            Error::InvalidConfig(_) | Error::UnknownMethod { .. } | Error::EmptyFrameSet => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
        assert_eq!(CliError::Io(String::new()).exit_code(), 2);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 3);
    }

    #[test]
    fn core_errors_map_to_the_documented_classes() {
        assert_eq!(
            CliError::from(Error::EmptyFrameSet).exit_code(),
            1,
            "validation errors are configuration errors"
        );
        let io = Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "gone"));
        assert_eq!(CliError::from(io).exit_code(), 2);
        let num = Error::PeakMismatch { a: 255.0, b: 1.0 };
        assert_eq!(CliError::from(num).exit_code(), 3);
    }
}
