use std::path::PathBuf;

/// Failures of the harness, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad command line, configuration or schema (exit 1).
    #[error("{0}")]
    Usage(String),
    /// The computation itself failed (exit 2).
    #[error(transparent)]
    Numeric(#[from] nematic_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Format {
        context: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    /// A named pipeline stage or upstream sub-command failed.
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<HarnessError>,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Numeric(nematic_core::Error::InvalidParameter(_)) => 1,
            HarnessError::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(
        context: impl Into<String>,
        source: impl std::error::Error + Send + Sync + 'static,
    ) -> Self {
        HarnessError::Format {
            context: context.into(),
            source: Box::new(source),
        }
    }

    pub fn stage(stage: impl Into<String>, source: HarnessError) -> Self {
        HarnessError::Stage {
            stage: stage.into(),
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Usage(msg.into()))
}
