use thiserror::Error;

/// Process exit status for each failure class.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VALIDATION_FAILED: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    /// A metric could not be evaluated.
    #[error("{metric}: {source}")]
    Metric {
        metric: &'static str,
        #[source]
        source: risec_core::Error,
    },

    #[error("sweep row {index} ({param} = {value}): {source}")]
    Row {
        index: usize,
        param: &'static str,
        value: f64,
        #[source]
        source: Box<CliError>,
    },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn metric(metric: &'static str, source: risec_core::Error) -> Self {
        CliError::Metric { metric, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => exit::CONFIG,
            CliError::Metric { source, .. } => match source {
                risec_core::Error::InvalidParameter { .. } => exit::CONFIG,
                _ => exit::NUMERICAL,
            },
            CliError::Row { source, .. } => source.exit_code(),
        }
    }
}
