use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("role error: {0}")]
    Role(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("integrality error: {0}")]
    Integrality(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("conversion error in column `{column}`: cannot read `{value}` as a number")]
    Conversion { column: String, value: String },

    #[error("balanced classification rate is undefined: {0}")]
    UndefinedBcr(String),

    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for data problems,
    /// 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_)
            | Error::Role(_)
            | Error::Config(_)
            | Error::Parameter(_)
            | Error::Integrality(_) => 1,
            Error::Alignment(_)
            | Error::EmptyInput(_)
            | Error::Parse { .. }
            | Error::Conversion { .. }
            | Error::UndefinedBcr(_)
            | Error::Read { .. }
            | Error::Csv(_) => 2,
            Error::Write { .. } | Error::Json(_) => 3,
        }
    }
}
