use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("degenerate channel: {0}")]
    Degenerate(String),

    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },

    #[error("{}", format_config_error(.line, .key, .message))]
    Config {
        line: Option<usize>,
        key: Option<String>,
        message: String,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_config_error(line: &Option<usize>, key: &Option<String>, message: &str) -> String {
    match (line, key) {
        (Some(l), Some(k)) => format!("config line {l}: {k}: {message}"),
        (Some(l), None) => format!("config line {l}: {message}"),
        (None, Some(k)) => format!("config: {k}: {message}"),
        (None, None) => format!("config: {message}"),
    }
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            expected,
        }
    }

    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            message: message.into(),
        }
    }

    pub(crate) fn config(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            key: key.map(str::to_owned),
            message: message.into(),
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Invalid { .. })
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
