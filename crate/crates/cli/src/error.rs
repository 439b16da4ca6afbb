use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("could not parse config file: {0}")]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] ecsusy_core::Error),
}

impl CliError {
    /// Everything that stops a run before a report exists is a usage error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
