use std::path::PathBuf;

use crate::config::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the domain of an operation (out-of-range action,
    /// zero pull count, malformed interval).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration that cannot be run. Every diagnostic names a field.
    #[error("invalid configuration:{}", render_diagnostics(.0))]
    Config(Vec<Diagnostic>),

    #[error("cannot aggregate runs: {0}")]
    Aggregation(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("plot output: {0}")]
    Plot(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config(vec![Diagnostic::new(path, reason)])
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("\n  {d}")).collect()
}
