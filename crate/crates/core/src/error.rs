use thiserror::Error;

/// Errors raised by the analysis engine, the simulator and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A numerical routine failed to reach its tolerance.
    #[error("numerical error in {func}: {detail}")]
    Numerical {
        func: &'static str,
        detail: String,
        partial: Option<f64>,
    },

    /// Invalid configuration, with the offending field.
    #[error("invalid configuration `{field}`: {detail}")]
    Config { field: String, detail: String },

    /// Filesystem or serialization failure.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn numerical(func: &'static str, detail: impl Into<String>, partial: Option<f64>) -> Self {
        Error::Numerical {
            func,
            detail: detail.into(),
            partial,
        }
    }

    pub(crate) fn config(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            detail: detail.into(),
        }
    }

    /// Adds context to a numerical or domain error raised by a callee.
    pub(crate) fn within(self, func: &'static str) -> Self {
        match self {
            Error::Numerical {
                func: inner,
                detail,
                partial,
            } => Error::Numerical {
                func,
                detail: format!("{inner}: {detail}"),
                partial,
            },
            Error::Domain { func: inner, detail } => Error::Domain {
                func,
                detail: format!("{inner}: {detail}"),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
