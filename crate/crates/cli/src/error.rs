use thiserror::Error;

/// Everything that can stop a run. The `Display` form is the one-line
/// reason printed on stderr.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse: {path}:{line}:{column}: {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid: {path}:{line}: {msg}")]
    Invalid {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("hypothesis: {0}")]
    Hypothesis(String),
    #[error("numeric: {0}")]
    Numeric(String),
    #[error("verify: {0}")]
    NotShrinking(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Invalid { .. } => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Numeric(_) | CliError::NotShrinking(_) => 3,
        }
    }

    /// The reason on a single line.
    pub fn one_line(&self) -> String {
        self.to_string().replace('\n', " ")
    }
}

/// Maps a library failure at a given `t` onto the exit-status classes.
pub(crate) fn from_core(e: qasym_core::Error, t: f64) -> CliError {
    match e {
        qasym_core::Error::Hypothesis(d) => CliError::Hypothesis(d),
        e => CliError::Numeric(format!("t = {t}: {e}")),
    }
}
