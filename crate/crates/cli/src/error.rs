use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Provider(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Provider(_) => 3,
        }
    }
}

impl From<regstyle::datasets::DatasetError> for CliError {
    fn from(e: regstyle::datasets::DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<regstyle::biber::BiberError> for CliError {
    fn from(e: regstyle::biber::BiberError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<regstyle::pipeline::PipelineError> for CliError {
    fn from(e: regstyle::pipeline::PipelineError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
