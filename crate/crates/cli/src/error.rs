use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error at {path} (line {line}, column {column}): {message}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("box {index}: {source}")]
    Box { index: usize, source: prophet_core::Error },
    #[error(transparent)]
    Model(#[from] prophet_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("output: {0}")]
    Output(String),
}
