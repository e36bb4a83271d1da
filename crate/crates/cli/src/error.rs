use cigan_core::data::DataError;
use cigan_core::eval::{ClassifierError, PipelineError};
use cigan_core::gan::GanError;
use cigan_core::resample::ResampleError;
use thiserror::Error;

/// A failed command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or output location. Exit 1.
    #[error("{0}")]
    Config(String),
    /// Unreadable or unusable input data, or unwritable output. Exit 2.
    #[error("{0}")]
    Data(String),
    /// GAN training produced non-finite values. Exit 3.
    #[error("{0}")]
    Divergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Data(_) => 2,
            Self::Divergence(_) => 3,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::InvalidSplit(_) => Self::Config(e.to_string()),
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<GanError> for CliError {
    fn from(e: GanError) -> Self {
        match e {
            GanError::NonFiniteLoss { .. } => Self::Divergence(e.to_string()),
            GanError::DegenerateClass { .. } => Self::Data(e.to_string()),
            GanError::InvalidConfig(_) | GanError::InvalidCodingSize(_) | GanError::Network(_) => {
                Self::Config(e.to_string())
            }
        }
    }
}

impl From<ResampleError> for CliError {
    fn from(e: ResampleError) -> Self {
        match e {
            ResampleError::Gan(g) => g.into(),
            ResampleError::Data(d) => d.into(),
            ResampleError::EmptyLabels => Self::Data(e.to_string()),
            ResampleError::UnknownClass(_)
            | ResampleError::MajorityInMinorList(_)
            | ResampleError::Pool(_) => Self::Config(e.to_string()),
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::InvalidSpec(_) => Self::Config(e.to_string()),
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Split(d) | PipelineError::Scale(d) => d.into(),
            PipelineError::Resample(r) => r.into(),
            PipelineError::Classifier { branch, source } => match CliError::from(source) {
                Self::Config(m) => Self::Config(format!("{branch} classifier: {m}")),
                Self::Data(m) => Self::Data(format!("{branch} classifier: {m}")),
                Self::Divergence(m) => Self::Divergence(m),
            },
            PipelineError::Metrics(_) => Self::Data(e.to_string()),
            PipelineError::NoCandidates => Self::Config(e.to_string()),
        }
    }
}

pub fn write_error(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("cannot write {}: {e}", path.display()))
}

impl CliError {
    /// Prefixes the message with the offending path.
    pub fn with_context(self, path: &std::path::Path) -> Self {
        let wrap = |m: String| format!("{}: {m}", path.display());
        match self {
            Self::Config(m) => Self::Config(wrap(m)),
            Self::Data(m) => Self::Data(wrap(m)),
            Self::Divergence(m) => Self::Divergence(wrap(m)),
        }
    }
}
